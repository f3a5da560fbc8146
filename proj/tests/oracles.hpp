#pragma once

// Test-only reference implementations. These are deliberately naive and
// share no code paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "roughkm/roughset.hpp"

namespace oracle {

using Table = std::vector<std::vector<int>>;  // [object][attribute]

inline bool agree_on(const Table& t, std::size_t o1, std::size_t o2, const std::vector<std::size_t>& attrs) {
  for (auto a : attrs) {
    if (t[o1][a] != t[o2][a]) return false;
  }
  return true;
}

// Blocks of IND(attrs) by pairwise comparison: each object joins the block of
// the first earlier object it agrees with.
inline std::vector<std::vector<std::size_t>> partition(const Table& t, const std::vector<std::size_t>& attrs) {
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t o = 0; o < t.size(); ++o) {
    bool placed = false;
    for (auto& b : blocks) {
      if (agree_on(t, b.front(), o, attrs)) {
        b.push_back(o);
        placed = true;
        break;
      }
    }
    if (!placed) blocks.push_back({o});
  }
  return blocks;
}

// o is in POS_R(y) iff every object R-indiscernible from o has o's y value.
inline std::vector<std::size_t> positive_region(const Table& t, const std::vector<std::size_t>& r, std::size_t y) {
  std::vector<std::size_t> pos;
  for (std::size_t o = 0; o < t.size(); ++o) {
    bool certain = true;
    for (std::size_t p = 0; p < t.size() && certain; ++p) {
      if (agree_on(t, o, p, r) && t[o][y] != t[p][y]) certain = false;
    }
    if (certain) pos.push_back(o);
  }
  return pos;
}

// Mean dependency as (sum of |POS|, |U| * |C|).
inline std::pair<std::uint64_t, std::uint64_t> mean_dependency(const Table& t, const std::vector<std::size_t>& r) {
  const std::size_t attrs = t.front().size();
  std::uint64_t total = 0;
  for (std::size_t y = 0; y < attrs; ++y) total += positive_region(t, r, y).size();
  return {total, static_cast<std::uint64_t>(t.size()) * attrs};
}

// Smallest subset size reaching the full set's mean dependency, by
// enumerating subsets in order of increasing size.
inline std::size_t minimal_reduct_size(const Table& t) {
  const std::size_t attrs = t.front().size();
  std::vector<std::size_t> all(attrs);
  for (std::size_t a = 0; a < attrs; ++a) all[a] = a;
  const auto target = mean_dependency(t, all);
  for (std::size_t size = 0; size < attrs; ++size) {
    std::vector<bool> pick(attrs, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      std::vector<std::size_t> subset;
      for (std::size_t a = 0; a < attrs; ++a) {
        if (pick[a]) subset.push_back(a);
      }
      if (mean_dependency(t, subset) == target) return size;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return attrs;
}

inline Table random_table(std::mt19937_64& rng, std::size_t max_objects = 8, std::size_t max_attrs = 6,
                          int categories = 3) {
  std::uniform_int_distribution<std::size_t> objs(1, max_objects);
  std::uniform_int_distribution<std::size_t> attrs(1, max_attrs);
  std::uniform_int_distribution<int> value(0, categories - 1);
  Table t(objs(rng), std::vector<int>(attrs(rng)));
  for (auto& row : t)
    for (auto& v : row) v = value(rng);
  return t;
}

inline roughkm::InformationTable to_information_table(const Table& t) {
  std::vector<std::string> objects(t.size());
  std::vector<std::string> attrs(t.front().size());
  for (std::size_t o = 0; o < objects.size(); ++o) objects[o] = "o" + std::to_string(o + 1);
  for (std::size_t a = 0; a < attrs.size(); ++a) attrs[a] = "a" + std::to_string(a + 1);
  std::vector<int> values;
  for (const auto& row : t) values.insert(values.end(), row.begin(), row.end());
  return {objects, attrs, values};
}

// Silhouette by direct double loop over every pair.
inline std::vector<double> silhouette(const std::vector<std::vector<double>>& pts,
                                      const std::vector<std::size_t>& labels) {
  auto dist = [](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
  };
  std::set<std::size_t> clusters(labels.begin(), labels.end());
  std::vector<double> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::map<std::size_t, std::pair<double, std::size_t>> acc;  // cluster -> (sum, count)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      auto& e = acc[labels[j]];
      e.first += dist(pts[i], pts[j]);
      e.second += 1;
    }
    if (acc[labels[i]].second == 0) {
      out[i] = 0.0;
      continue;
    }
    const double a = acc[labels[i]].first / static_cast<double>(acc[labels[i]].second);
    double b = INFINITY;
    for (auto c : clusters) {
      if (c == labels[i] || acc[c].second == 0) continue;
      b = std::min(b, acc[c].first / static_cast<double>(acc[c].second));
    }
    out[i] = std::max(a, b) == 0 ? 0.0 : (b - a) / std::max(a, b);
  }
  return out;
}

// True when two labelings induce the same partition (labels may be permuted).
inline bool same_partition(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  if (x.size() != y.size()) return false;
  std::map<std::size_t, std::size_t> fwd;
  std::map<std::size_t, std::size_t> back;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto [f, f_new] = fwd.emplace(x[i], y[i]);
    auto [b, b_new] = back.emplace(y[i], x[i]);
    if (f->second != y[i] || b->second != x[i]) return false;
  }
  return true;
}

}  // namespace oracle
