#pragma once

// Expression matrices: parsing, filtering, min-max normalization and
// regulation-pattern discretization.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "roughkm/error.hpp"

namespace roughkm {

enum class Orientation { genes_as_rows, genes_as_columns };

namespace detail {

inline void require_unique(const std::vector<std::string>& ids, std::string_view axis) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(ids.size());
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw ValidationError("duplicate " + std::string(axis) + " label '" + id + "'");
    }
  }
}

}  // namespace detail

/// Genes x conditions matrix of expression levels. Entries may be missing.
/// Storage is row-major; rows are genes, columns are conditions.
class ExpressionMatrix {
 public:
  ExpressionMatrix() = default;

  ExpressionMatrix(std::vector<std::string> gene_ids, std::vector<std::string> condition_ids,
                   std::vector<std::optional<double>> values)
      : gene_ids_(std::move(gene_ids)),
        condition_ids_(std::move(condition_ids)),
        values_(std::move(values)) {
    if (values_.size() != gene_ids_.size() * condition_ids_.size()) {
      throw ValidationError("matrix has " + std::to_string(values_.size()) + " values, expected " +
                            std::to_string(gene_ids_.size()) + " x " +
                            std::to_string(condition_ids_.size()));
    }
    detail::require_unique(gene_ids_, "gene");
    detail::require_unique(condition_ids_, "condition");
  }

  // Convenience for complete matrices given as rows.
  static ExpressionMatrix from_rows(std::vector<std::string> gene_ids,
                                    std::vector<std::string> condition_ids,
                                    const std::vector<std::vector<double>>& rows) {
    std::vector<std::optional<double>> values;
    values.reserve(gene_ids.size() * condition_ids.size());
    for (const auto& row : rows) {
      if (row.size() != condition_ids.size()) {
        throw ValidationError("row of width " + std::to_string(row.size()) + ", expected " +
                              std::to_string(condition_ids.size()));
      }
      values.insert(values.end(), row.begin(), row.end());
    }
    if (rows.size() != gene_ids.size()) {
      throw ValidationError("got " + std::to_string(rows.size()) + " rows for " +
                            std::to_string(gene_ids.size()) + " genes");
    }
    return {std::move(gene_ids), std::move(condition_ids), std::move(values)};
  }

  std::size_t rows() const noexcept { return gene_ids_.size(); }
  std::size_t cols() const noexcept { return condition_ids_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  const std::vector<std::string>& gene_ids() const noexcept { return gene_ids_; }
  const std::vector<std::string>& condition_ids() const noexcept { return condition_ids_; }
  const std::vector<std::optional<double>>& values() const noexcept { return values_; }

  const std::optional<double>& at(std::size_t gene, std::size_t condition) const {
    return values_.at(gene * cols() + condition);
  }

  // Present value; throws if the entry is missing.
  double value(std::size_t gene, std::size_t condition) const {
    const auto& v = at(gene, condition);
    if (!v) {
      throw ValidationError("missing value at gene '" + gene_ids_[gene] + "', condition '" +
                            condition_ids_[condition] + "'");
    }
    return *v;
  }

  std::vector<double> row(std::size_t gene) const {
    std::vector<double> out(cols());
    for (std::size_t c = 0; c < cols(); ++c) out[c] = value(gene, c);
    return out;
  }

  std::size_t missing_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](const auto& v) { return !v; }));
  }
  bool is_complete() const noexcept { return missing_count() == 0; }

  ExpressionMatrix transposed() const {
    std::vector<std::optional<double>> out(values_.size());
    for (std::size_t r = 0; r < rows(); ++r)
      for (std::size_t c = 0; c < cols(); ++c) out[c * rows() + r] = at(r, c);
    return {condition_ids_, gene_ids_, std::move(out)};
  }

  // Submatrix of the given rows, in the order given.
  ExpressionMatrix select_rows(const std::vector<std::size_t>& genes) const {
    std::vector<std::string> ids;
    std::vector<std::optional<double>> out;
    ids.reserve(genes.size());
    out.reserve(genes.size() * cols());
    for (auto g : genes) {
      ids.push_back(gene_ids_.at(g));
      auto first = values_.begin() + static_cast<std::ptrdiff_t>(g * cols());
      out.insert(out.end(), first, first + static_cast<std::ptrdiff_t>(cols()));
    }
    return {std::move(ids), condition_ids_, std::move(out)};
  }

  friend bool operator==(const ExpressionMatrix&, const ExpressionMatrix&) = default;

 private:
  std::vector<std::string> gene_ids_;
  std::vector<std::string> condition_ids_;
  std::vector<std::optional<double>> values_;
};

/// Same shape as the source expression matrix; entries in {-1, 0, +1}.
class DiscretizedMatrix {
 public:
  DiscretizedMatrix() = default;

  DiscretizedMatrix(std::vector<std::string> gene_ids, std::vector<std::string> condition_ids,
                    std::vector<std::int8_t> values)
      : gene_ids_(std::move(gene_ids)),
        condition_ids_(std::move(condition_ids)),
        values_(std::move(values)) {
    if (values_.size() != gene_ids_.size() * condition_ids_.size()) {
      throw ValidationError("discretized matrix shape mismatch");
    }
    for (auto v : values_) {
      if (v < -1 || v > 1) throw ValidationError("discretized entry out of {-1,0,1}");
    }
    detail::require_unique(gene_ids_, "gene");
    detail::require_unique(condition_ids_, "condition");
  }

  std::size_t rows() const noexcept { return gene_ids_.size(); }
  std::size_t cols() const noexcept { return condition_ids_.size(); }
  const std::vector<std::string>& gene_ids() const noexcept { return gene_ids_; }
  const std::vector<std::string>& condition_ids() const noexcept { return condition_ids_; }
  const std::vector<std::int8_t>& values() const noexcept { return values_; }
  int at(std::size_t gene, std::size_t condition) const {
    return values_.at(gene * cols() + condition);
  }

  friend bool operator==(const DiscretizedMatrix&, const DiscretizedMatrix&) = default;

 private:
  std::vector<std::string> gene_ids_;
  std::vector<std::string> condition_ids_;
  std::vector<std::int8_t> values_;
};

struct NormalizationParams {
  double new_min = 0.0;
  double new_max = 1.0;
};

// ---------------------------------------------------------------------------
// Text I/O

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  // Trailing blank lines are not rows.
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    auto end = line.find(delimiter, start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

inline bool is_missing_token(std::string_view field) {
  auto lower_eq = [](std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
             return std::tolower(static_cast<unsigned char>(x)) == y;
           });
  };
  return field.empty() || lower_eq(field, "na") || lower_eq(field, "nan");
}

inline std::optional<double> parse_real(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
  return v;
}

inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct RawTable {
  std::vector<std::string> column_ids;
  std::vector<std::string> row_ids;
  std::vector<std::string_view> cells;  // row-major, views into the source text
  std::vector<std::size_t> line_of_row;
};

inline RawTable split_table(std::string_view text, char delimiter) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("input has no header row", 1);
  auto header = split_fields(lines[0], delimiter);
  if (header.size() < 2) throw ParseError("header row needs a label column and at least one data column", 1);

  RawTable t;
  for (std::size_t i = 1; i < header.size(); ++i) t.column_ids.emplace_back(trim(header[i]));
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    auto fields = split_fields(lines[li], delimiter);
    if (fields.size() != header.size()) {
      throw ParseError("row has " + std::to_string(fields.size()) + " fields, header has " +
                           std::to_string(header.size()),
                       li + 1);
    }
    t.row_ids.emplace_back(trim(fields[0]));
    t.line_of_row.push_back(li + 1);
    for (std::size_t i = 1; i < fields.size(); ++i) t.cells.push_back(trim(fields[i]));
  }
  return t;
}

}  // namespace detail

// Delimiter chosen from a file name: ".csv" is comma, everything else is tab.
inline char delimiter_for_path(std::string_view path) {
  auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return '\t';
  std::string ext(path.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == "csv" ? ',' : '\t';
}

/// Parses a delimited table with a header row of column labels and a first
/// column of row labels. Empty fields and "NA"/"nan" (any case) are missing.
/// The result is always genes-as-rows.
inline ExpressionMatrix parse_matrix(std::string_view text, Orientation orientation,
                                     char delimiter = '\t') {
  auto raw = detail::split_table(text, delimiter);
  const std::size_t width = raw.column_ids.size();
  std::vector<std::optional<double>> values;
  values.reserve(raw.cells.size());
  for (std::size_t r = 0; r < raw.row_ids.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      auto cell = raw.cells[r * width + c];
      if (detail::is_missing_token(cell)) {
        values.emplace_back();
        continue;
      }
      auto v = detail::parse_real(cell);
      if (!v) {
        throw ParseError("non-numeric field '" + std::string(cell) + "'", raw.line_of_row[r], c + 2);
      }
      values.emplace_back(*v);
    }
  }
  ExpressionMatrix m(std::move(raw.row_ids), std::move(raw.column_ids), std::move(values));
  return orientation == Orientation::genes_as_rows ? m : m.transposed();
}

inline DiscretizedMatrix parse_discretized(std::string_view text, char delimiter = '\t') {
  auto raw = detail::split_table(text, delimiter);
  const std::size_t width = raw.column_ids.size();
  std::vector<std::int8_t> values;
  values.reserve(raw.cells.size());
  for (std::size_t r = 0; r < raw.row_ids.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      auto cell = raw.cells[r * width + c];
      int v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || v < -1 || v > 1) {
        throw ParseError("expected -1, 0 or 1, got '" + std::string(cell) + "'",
                         raw.line_of_row[r], c + 2);
      }
      values.push_back(static_cast<std::int8_t>(v));
    }
  }
  return {std::move(raw.row_ids), std::move(raw.column_ids), std::move(values)};
}

inline std::string write_matrix(const ExpressionMatrix& m, char delimiter = '\t') {
  std::string out = "gene";
  for (const auto& c : m.condition_ids()) (out += delimiter) += c;
  out += '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += m.gene_ids()[r];
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out += delimiter;
      const auto& v = m.at(r, c);
      out += v ? detail::format_real(*v) : "NA";
    }
    out += '\n';
  }
  return out;
}

inline std::string write_discretized(const DiscretizedMatrix& d, char delimiter = '\t') {
  std::string out = "gene";
  for (const auto& c : d.condition_ids()) (out += delimiter) += c;
  out += '\n';
  for (std::size_t r = 0; r < d.rows(); ++r) {
    out += d.gene_ids()[r];
    for (std::size_t c = 0; c < d.cols(); ++c) {
      out += delimiter;
      out += std::to_string(d.at(r, c));
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transformations

/// Keeps only genes without missing entries, in their original order.
inline ExpressionMatrix drop_incomplete_genes(const ExpressionMatrix& m) {
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    bool complete = true;
    for (std::size_t c = 0; c < m.cols() && complete; ++c) complete = m.at(r, c).has_value();
    if (complete) keep.push_back(r);
  }
  if (keep.empty()) throw EmptyResultError("every gene has at least one missing value");
  return m.select_rows(keep);
}

/// Per-condition min-max rescaling into [p.new_min, p.new_max]. A constant
/// column maps to new_min; its label is appended to `warnings` when given.
inline ExpressionMatrix min_max_normalize(const ExpressionMatrix& m, const NormalizationParams& p,
                                          std::vector<std::string>* warnings = nullptr) {
  if (!(p.new_min < p.new_max)) throw ConfigError("normalization requires new_min < new_max");
  if (!m.is_complete()) throw ValidationError("normalization requires a complete matrix");

  std::vector<std::optional<double>> out(m.values().size());
  const double span = p.new_max - p.new_min;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double lo = m.value(0, c);
    double hi = lo;
    for (std::size_t r = 1; r < m.rows(); ++r) {
      lo = std::min(lo, m.value(r, c));
      hi = std::max(hi, m.value(r, c));
    }
    if (hi == lo) {
      if (warnings) {
        warnings->push_back("condition '" + m.condition_ids()[c] + "' is constant; mapped to new_min");
      }
      for (std::size_t r = 0; r < m.rows(); ++r) out[r * m.cols() + c] = p.new_min;
      continue;
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const double v = m.value(r, c);
      double scaled;
      // Pin the endpoints so rounding cannot push them off new_min/new_max.
      if (v == lo) {
        scaled = p.new_min;
      } else if (v == hi) {
        scaled = p.new_max;
      } else {
        scaled = (v - lo) / (hi - lo) * span + p.new_min;
        scaled = std::clamp(scaled, p.new_min, p.new_max);
      }
      out[r * m.cols() + c] = scaled;
    }
  }
  return {m.gene_ids(), m.condition_ids(), std::move(out)};
}

/// Regulation pattern per gene: the first condition carries the sign of the
/// value, each later condition the sign of the change from its predecessor.
inline DiscretizedMatrix discretize(const ExpressionMatrix& m) {
  if (m.cols() == 0) throw ValidationError("discretization needs at least one condition");
  if (!m.is_complete()) throw ValidationError("discretization requires a complete matrix");
  auto sign = [](double x) -> std::int8_t { return x > 0 ? 1 : (x < 0 ? -1 : 0); };

  std::vector<std::int8_t> out(m.values().size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out[r * m.cols()] = sign(m.value(r, 0));
    for (std::size_t c = 1; c < m.cols(); ++c) {
      const double prev = m.value(r, c - 1);
      const double cur = m.value(r, c);
      out[r * m.cols() + c] = cur > prev ? 1 : (cur < prev ? -1 : 0);
    }
  }
  return {m.gene_ids(), m.condition_ids(), std::move(out)};
}

}  // namespace roughkm
