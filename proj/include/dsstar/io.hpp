#pragma once

#include "dsstar/mgm.hpp"
#include "dsstar/qap.hpp"
#include "dsstar/relaxation.hpp"

#include "json.hpp"

#include <string>

namespace dsstar {

using Json = nlohmann::json;

/// {"n": n, "W": [[...] x n^2] } or {"n": n, "A": [[...]], "B": [[...]]},
/// optional "c": [n^2 values].  Throws std::invalid_argument on bad shapes.
QapInstance qap_from_json(const Json& j);
Json qap_to_json(const QapInstance& inst);

Json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const Json& j);

/// 1-based: entry j is the row (counted from 1) holding the one of column j.
Json permutation_to_json(const PermutationMatrix& p);
PermutationMatrix permutation_from_json(const Json& j);

Json bounds_to_json(const BoundsReport& r);

/// {"k", "n", "pairs": [{"i", "j", "W"} ...], optional "truth": [perm ...]}.
MgmInstance mgm_from_json(const Json& j);
Json mgm_to_json(const MgmInstance& inst);
Json block_matching_to_json(const BlockMatching& X);

/// One item per line, comma-separated reals; blank lines and lines starting
/// with '#' are skipped.
Matrix read_features_csv(const std::string& path);

Json read_json_file(const std::string& path);

}  // namespace dsstar
