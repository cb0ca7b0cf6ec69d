#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "opkit/hopf.hpp"
#include "opkit/operad.hpp"

namespace opkit::io {

using Json = nlohmann::json;

/// "Q" or {"Fp": p}.
Json to_json(const Field& f);
Field field_from_json(const Json& j);

/// Rationals travel as strings ("-3/4"); plain JSON integers are accepted on input.
std::string scalar_to_string(const Scalar& s);
Scalar scalar_from_json(const Field& f, const Json& j, const std::string& where);

/// {"field", "generators": [{"label","arity","degree","symmetry"}],
///  "relations": [[{"tree", "vertexLabels", "coeff"}]]}. A tree is a nested
/// list: integers are leaves (1-based), lists are vertices, labelled in
/// preorder by vertexLabels.
Json to_json(const OperadPresentation& p);
OperadPresentation presentation_from_json(const Json& j);

/// {"field", "arities": {"n": {"degrees": {"d": {"basis": [...]}},
///  "transpositions": [[[entry, ...], ...], ...]}}}; matrices are dense rows
/// of rational strings.
Json to_json(const SymSeqObject& x);
SymSeqObject symseq_from_json(const Json& j);

/// {"field", "basis": [{"label","degree"}],
///  "brackets": [{"left","right","value": {label: coeff}}]}.
Json to_json(const LiePresentation& l);
LiePresentation lie_from_json(const Json& j);

/// Parses text, turning parse errors into ValidationError.
Json parse(const std::string& text, const std::string& what);
Json read_file(const std::string& path);

/// A rendered result: fixed columns, string cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const;
  std::string pretty() const;
  Json to_json() const;
  static Table from_json(const Json& j);
  friend bool operator==(const Table&, const Table&) = default;
};

/// Rows (arity, degree, dim) over the nonzero degrees of arities >= from.
Table arity_table(const SymSeqObject& x, int from = 1);
/// Rows (degree, dim) for degrees from..dims.size()-1.
Table degree_table(const std::vector<std::size_t>& dims, int from = 0);

}  // namespace opkit::io
