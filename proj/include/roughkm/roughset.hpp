#pragma once

// Rough-set primitives over a categorical information table and the
// unsupervised quick-reduct (USQR) attribute selection built on them.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "roughkm/data_model.hpp"
#include "roughkm/error.hpp"

namespace roughkm {

using Symbol = int;

/// Exact non-negative rational with a positive denominator.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Ratio reduced() const {
    const auto g = std::gcd(num, den);
    return g == 0 ? Ratio{0, 1} : Ratio{num / g, den / g};
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const {
    const auto r = reduced();
    return std::to_string(r.num) + "/" + std::to_string(r.den);
  }

  friend bool operator==(const Ratio& a, const Ratio& b) {
    return static_cast<unsigned __int128>(a.num) * b.den == static_cast<unsigned __int128>(b.num) * a.den;
  }
  friend bool operator<(const Ratio& a, const Ratio& b) {
    return static_cast<unsigned __int128>(a.num) * b.den < static_cast<unsigned __int128>(b.num) * a.den;
  }
  friend bool operator>(const Ratio& a, const Ratio& b) { return b < a; }
  friend bool operator<=(const Ratio& a, const Ratio& b) { return !(b < a); }
  friend bool operator>=(const Ratio& a, const Ratio& b) { return !(a < b); }
};

/// Objects (rows) described by categorical conditional attributes (columns).
class InformationTable {
 public:
  InformationTable() = default;

  InformationTable(std::vector<std::string> object_ids, std::vector<std::string> attribute_ids,
                   std::vector<Symbol> values)
      : object_ids_(std::move(object_ids)),
        attribute_ids_(std::move(attribute_ids)),
        values_(std::move(values)) {
    if (values_.size() != object_ids_.size() * attribute_ids_.size()) {
      throw ValidationError("information table shape mismatch");
    }
    detail::require_unique(object_ids_, "object");
    detail::require_unique(attribute_ids_, "attribute");
    index_.reserve(attribute_ids_.size());
    for (std::size_t a = 0; a < attribute_ids_.size(); ++a) index_.emplace(attribute_ids_[a], a);
  }

  std::size_t objects() const noexcept { return object_ids_.size(); }
  std::size_t attributes() const noexcept { return attribute_ids_.size(); }
  const std::vector<std::string>& object_ids() const noexcept { return object_ids_; }
  const std::vector<std::string>& attribute_ids() const noexcept { return attribute_ids_; }

  Symbol at(std::size_t object, std::size_t attribute) const {
    return values_[object * attributes() + attribute];
  }

  std::size_t attribute_index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw LookupError("unknown attribute '" + id + "'");
    return it->second;
  }

 private:
  std::vector<std::string> object_ids_;
  std::vector<std::string> attribute_ids_;
  std::vector<Symbol> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A set of attribute indices into one table.
struct AttributeSet {
  std::vector<std::size_t> indices;

  static AttributeSet resolve(const InformationTable& t, const std::vector<std::string>& ids) {
    AttributeSet s;
    s.indices.reserve(ids.size());
    for (const auto& id : ids) s.indices.push_back(t.attribute_index(id));
    return s;
  }
  static AttributeSet all(const InformationTable& t) {
    AttributeSet s;
    s.indices.resize(t.attributes());
    std::iota(s.indices.begin(), s.indices.end(), std::size_t{0});
    return s;
  }
  bool contains(std::size_t a) const {
    return std::find(indices.begin(), indices.end(), a) != indices.end();
  }
  AttributeSet with(std::size_t a) const {
    AttributeSet s = *this;
    s.indices.push_back(a);
    return s;
  }
};

/// Set partition of the table's objects. Blocks are ordered by their first
/// object and list objects in ascending order; `block_of[o]` indexes `blocks`.
struct Partition {
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> block_of;

  friend bool operator==(const Partition& a, const Partition& b) { return a.blocks == b.blocks; }
};

namespace detail {

inline Partition partition_from_labels(const std::vector<std::size_t>& labels, std::size_t count) {
  Partition p;
  p.block_of = labels;
  p.blocks.resize(count);
  for (std::size_t o = 0; o < labels.size(); ++o) p.blocks[labels[o]].push_back(o);
  return p;
}

// Splits each block of `labels` by the value of attribute `a`. Block ids are
// assigned in order of first appearance so the result is canonical.
inline std::size_t refine_labels(const InformationTable& t, std::size_t a,
                                 std::vector<std::size_t>& labels) {
  struct KeyHash {
    std::size_t operator()(const std::pair<std::size_t, Symbol>& k) const noexcept {
      return std::hash<std::size_t>{}(k.first) * 31u ^ std::hash<Symbol>{}(k.second);
    }
  };
  std::unordered_map<std::pair<std::size_t, Symbol>, std::size_t, KeyHash> ids;
  ids.reserve(labels.size());
  for (std::size_t o = 0; o < labels.size(); ++o) {
    auto [it, fresh] = ids.try_emplace({labels[o], t.at(o, a)}, ids.size());
    labels[o] = it->second;
  }
  return ids.size();
}

}  // namespace detail

/// IND(attrs): objects share a block iff they agree on every attribute in attrs.
inline Partition indiscernibility_partition(const InformationTable& t, const AttributeSet& attrs) {
  std::vector<std::size_t> labels(t.objects(), 0);
  std::size_t count = t.objects() == 0 ? 0 : 1;
  for (auto a : attrs.indices) {
    if (a >= t.attributes()) throw LookupError("attribute index out of range");
    count = detail::refine_labels(t, a, labels);
  }
  return detail::partition_from_labels(labels, count);
}

inline Partition indiscernibility_partition(const InformationTable& t,
                                            const std::vector<std::string>& attrs) {
  return indiscernibility_partition(t, AttributeSet::resolve(t, attrs));
}

namespace detail {

// Number of objects whose block in `r` lies inside a single block of `y`.
inline std::size_t positive_count(const Partition& r, const std::vector<std::size_t>& y_block_of) {
  std::size_t count = 0;
  for (const auto& block : r.blocks) {
    const auto y0 = y_block_of[block.front()];
    bool inside = std::all_of(block.begin(), block.end(),
                              [&](std::size_t o) { return y_block_of[o] == y0; });
    if (inside) count += block.size();
  }
  return count;
}

}  // namespace detail

/// POS_r(y): union of the IND(r) blocks contained in some IND({y}) block.
inline std::vector<std::size_t> positive_region(const InformationTable& t, const AttributeSet& r,
                                                std::size_t y) {
  if (y >= t.attributes()) throw LookupError("attribute index out of range");
  const auto pr = indiscernibility_partition(t, r);
  const auto py = indiscernibility_partition(t, AttributeSet{{y}});
  std::vector<std::size_t> pos;
  for (const auto& block : pr.blocks) {
    const auto y0 = py.block_of[block.front()];
    if (std::all_of(block.begin(), block.end(), [&](std::size_t o) { return py.block_of[o] == y0; })) {
      pos.insert(pos.end(), block.begin(), block.end());
    }
  }
  std::sort(pos.begin(), pos.end());
  return pos;
}

inline std::vector<std::size_t> positive_region(const InformationTable& t,
                                                const std::vector<std::string>& r,
                                                const std::string& y) {
  return positive_region(t, AttributeSet::resolve(t, r), t.attribute_index(y));
}

/// gamma_r(y) = |POS_r(y)| / |U|, exact.
inline Ratio dependency(const InformationTable& t, const AttributeSet& r, std::size_t y) {
  if (t.objects() == 0) throw EmptyResultError("dependency on an empty table");
  return {positive_region(t, r, y).size(), t.objects()};
}

inline Ratio dependency(const InformationTable& t, const std::vector<std::string>& r,
                        const std::string& y) {
  return dependency(t, AttributeSet::resolve(t, r), t.attribute_index(y));
}

/// Precomputed single-attribute partitions, reused across many dependency
/// evaluations on the same table.
class DependencyEvaluator {
 public:
  explicit DependencyEvaluator(const InformationTable& t) : table_(&t) {
    single_.reserve(t.attributes());
    for (std::size_t a = 0; a < t.attributes(); ++a) {
      single_.push_back(indiscernibility_partition(t, AttributeSet{{a}}).block_of);
    }
  }

  // Mean over every y in C of gamma_r(y), as sum |POS| / (|U| * |C|).
  Ratio mean_dependency(const Partition& r) const {
    std::uint64_t total = 0;
    for (const auto& y : single_) total += detail::positive_count(r, y);
    return {total, static_cast<std::uint64_t>(table_->objects()) * table_->attributes()};
  }

  Ratio mean_dependency(const AttributeSet& r) const {
    return mean_dependency(indiscernibility_partition(*table_, r));
  }

 private:
  const InformationTable* table_;
  std::vector<std::vector<std::size_t>> single_;
};

inline Ratio mean_dependency(const InformationTable& t, const AttributeSet& r) {
  if (t.objects() == 0 || t.attributes() == 0) throw EmptyResultError("mean dependency on an empty table");
  return DependencyEvaluator(t).mean_dependency(r);
}

inline Ratio mean_dependency(const InformationTable& t, const std::vector<std::string>& r) {
  return mean_dependency(t, AttributeSet::resolve(t, r));
}

struct ReductRound {
  std::size_t accepted = 0;       // attribute index added this round
  Ratio mean_dependency;          // of R after adding `accepted`
  bool strict_improvement = true;  // false when added only to guarantee progress
  std::vector<std::pair<std::size_t, Ratio>> candidates;  // every x in C - R, scan order
};

struct Reduct {
  std::vector<std::size_t> selected;  // attribute indices, in order of selection
  std::vector<std::string> selected_ids;
  std::vector<ReductRound> trace;
  Ratio initial_mean_dependency;  // of the empty set
  Ratio final_mean_dependency;
  Ratio full_mean_dependency;  // of C
};

/// Greedy forward selection: repeatedly add the attribute that maximizes the
/// mean dependency, until it equals the mean dependency of the full set.
/// Ties go to the lowest attribute index. When no candidate strictly improves,
/// the best one is still added so every round makes progress.
inline Reduct usqr_reduct(const InformationTable& t) {
  if (t.objects() == 0 || t.attributes() == 0) throw EmptyResultError("USQR on an empty table");
  const DependencyEvaluator eval(t);

  Reduct out;
  out.full_mean_dependency = eval.mean_dependency(AttributeSet::all(t));

  std::vector<bool> in_reduct(t.attributes(), false);
  std::vector<std::size_t> labels(t.objects(), 0);
  std::size_t blocks = 1;
  Ratio current = eval.mean_dependency(detail::partition_from_labels(labels, blocks));
  out.initial_mean_dependency = current;

  while (!(current == out.full_mean_dependency)) {
    ReductRound round;
    std::vector<std::size_t> best_labels;
    std::size_t best_blocks = 0;
    bool have_best = false;
    Ratio best;
    for (std::size_t x = 0; x < t.attributes(); ++x) {
      if (in_reduct[x]) continue;
      auto cand_labels = labels;
      const auto cand_blocks = detail::refine_labels(t, x, cand_labels);
      const auto score = eval.mean_dependency(detail::partition_from_labels(cand_labels, cand_blocks));
      round.candidates.emplace_back(x, score);
      if (!have_best || score > best) {
        have_best = true;
        best = score;
        round.accepted = x;
        best_labels = std::move(cand_labels);
        best_blocks = cand_blocks;
      }
    }
    round.mean_dependency = best;
    round.strict_improvement = best > current;
    in_reduct[round.accepted] = true;
    out.selected.push_back(round.accepted);
    labels = std::move(best_labels);
    blocks = best_blocks;
    current = best;
    out.trace.push_back(std::move(round));
  }
  out.final_mean_dependency = current;
  for (auto a : out.selected) out.selected_ids.push_back(t.attribute_ids()[a]);
  return out;
}

/// Genes become attributes and conditions become objects.
inline InformationTable build_table(const DiscretizedMatrix& d) {
  if (d.rows() == 0 || d.cols() == 0) throw EmptyResultError("cannot build a table from an empty matrix");
  std::vector<Symbol> values(d.rows() * d.cols());
  for (std::size_t g = 0; g < d.rows(); ++g)
    for (std::size_t c = 0; c < d.cols(); ++c) values[c * d.rows() + g] = d.at(g, c);
  return {d.condition_ids(), d.gene_ids(), std::move(values)};
}

struct GeneSelection {
  ExpressionMatrix matrix;  // rows of the selected genes, original order
  Reduct reduct;
};

/// Runs USQR on the discretized table and restricts `m` to the reduct's genes.
inline GeneSelection select_genes(const ExpressionMatrix& m, const DiscretizedMatrix& d) {
  if (m.gene_ids() != d.gene_ids() || m.condition_ids() != d.condition_ids()) {
    throw ValidationError("expression and discretized matrices have different labels");
  }
  auto reduct = usqr_reduct(build_table(d));
  auto rows = reduct.selected;
  std::sort(rows.begin(), rows.end());
  return {m.select_rows(rows), std::move(reduct)};
}

}  // namespace roughkm
