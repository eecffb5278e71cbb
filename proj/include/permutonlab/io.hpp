#pragma once

#include <string>
#include <vector>

#include "permutonlab/dperm.hpp"
#include "permutonlab/oracle.hpp"
#include "permutonlab/permuton.hpp"
#include "permutonlab/schnyder.hpp"
#include "permutonlab/separable.hpp"

namespace permutonlab {

/// Writes via a temporary file in the same directory plus rename, so readers
/// never observe partial content.
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

/// {"d": int, "n": int, "cols": [[int,...],...]}, 1-based values.
std::string permutation_to_json(const DPermutation& p);
DPermutation permutation_from_json(const std::string& json_text);

/// Header "i,x1,...,xd", one binary64 row per point.
std::string cloud_to_csv(const PointCloud& cloud);

/// The cube-center cloud of a permutation: index i and value v map to
/// (2i-1)/(2n) and (2v-1)/(2n).
PointCloud normalized_cloud(const DPermutation& p);

/// {"n": int, "steps": [[dx,dy],...]}.
std::string walk_to_json(const ConeWalk& w);
ConeWalk walk_from_json(const std::string& json_text);

/// {"root": "green"|"red", "parent": {label: label|0}, "order": {label: [children]}}.
std::string forest_to_json(const RootedForest& f, const std::string& root_color);
RootedForest forest_from_json(const std::string& json_text);

/// {"kind": "sign"|"swap", "d": int, "node": {"label": [...]|null, "children": [...]}}.
std::string sign_tree_to_json(const SignTree& t);
std::string swap_tree_to_json(const SwapTree& t);
SignTree sign_tree_from_json(const std::string& json_text);
SwapTree swap_tree_from_json(const std::string& json_text);

/// {"pattern": "...", "rows": [{"n":..., "mean":..., "se":..., "reps":...}, ...]}.
std::string convergence_report_to_json(const ConvergenceReport& report);

std::string manifest_to_json(const std::vector<CheckResult>& results);

/// CSV with header "tau,occ,freq" over every pattern of size k, lexicographic
/// in the concatenated columns; tau serialized as "1,3,2|2,1,3".
std::string pattern_table_csv(const DPermutation& sigma, int k, int k_max = kDefaultKMax);

} // namespace permutonlab
