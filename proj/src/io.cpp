#include "opkit/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace opkit::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw ValidationError(where + ": " + what); }

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) bad(where, std::string("missing field '") + key + "'");
  return j.at(key);
}

int int_of(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<int>();
}

std::string string_of(const Json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

int key_int(const std::string& k, const std::string& where) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(k, &pos);
    if (pos == k.size()) return v;
  } catch (const std::exception&) {
  }
  bad(where, "key '" + k + "' is not an integer");
}

const char* symmetry_name(Symmetry s) {
  switch (s) {
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::antisymmetric: return "antisymmetric";
    default: return "none";
  }
}

Json tree_to_json(const ListedTree& t, std::vector<std::string>& labels) {
  if (t.leaf > 0) return t.leaf;
  labels.push_back(t.label);
  Json arr = Json::array();
  for (const auto& c : t.children) arr.push_back(tree_to_json(c, labels));
  return arr;
}

ListedTree tree_from_json(const Json& j, const std::vector<std::string>& labels, std::size_t& next, const std::string& where) {
  if (j.is_number_integer()) {
    int l = j.get<int>();
    if (l < 1) bad(where, "leaf labels are 1-based");
    return ListedTree::make_leaf(l);
  }
  if (!j.is_array() || j.empty()) bad(where, "a tree is a leaf integer or a nonempty list");
  if (next >= labels.size()) bad(where + ".vertexLabels", "fewer labels than vertices");
  std::string label = labels[next++];
  std::vector<ListedTree> children;
  for (const auto& c : j) children.push_back(tree_from_json(c, labels, next, where));
  return ListedTree::vertex(label, std::move(children));
}

}  // namespace

Json to_json(const Field& f) {
  if (f.is_rational()) return "Q";
  return Json{{"Fp", f.characteristic()}};
}

Field field_from_json(const Json& j) {
  if (j.is_string()) return Field::parse(j.get<std::string>());
  if (j.is_object() && j.contains("Fp")) {
    int p = int_of(j.at("Fp"), "field.Fp");
    if (p < 2) bad("field.Fp", "must be a prime");
    return Field::prime(static_cast<std::uint32_t>(p));
  }
  bad("field", "expected \"Q\" or {\"Fp\": p}");
}

std::string scalar_to_string(const Scalar& s) { return s.get_str(); }

Scalar scalar_from_json(const Field& f, const Json& j, const std::string& where) {
  if (j.is_number_integer()) return f.from_int(j.get<long>());
  if (!j.is_string()) bad(where, "expected a rational string");
  Scalar s;
  if (s.set_str(j.get<std::string>(), 10) != 0) bad(where, "cannot parse '" + j.get<std::string>() + "'");
  if (s.get_den() == 0) bad(where, "zero denominator");
  s.canonicalize();
  return f.normalize(s);
}

// ---------------------------------------------------------------------------

Json to_json(const OperadPresentation& p) {
  Json gens = Json::array();
  for (const auto& g : p.generators)
    gens.push_back({{"label", g.label}, {"arity", g.arity}, {"degree", g.degree}, {"symmetry", symmetry_name(g.symmetry)}});
  Json rels = Json::array();
  for (const auto& rel : p.relations) {
    Json terms = Json::array();
    for (const auto& t : rel) {
      std::vector<std::string> labels;
      Json tree = tree_to_json(t.tree, labels);
      terms.push_back({{"tree", tree}, {"vertexLabels", labels}, {"coeff", scalar_to_string(p.field.normalize(t.coeff))}});
    }
    rels.push_back(terms);
  }
  return {{"field", to_json(p.field)}, {"generators", gens}, {"relations", rels}};
}

OperadPresentation presentation_from_json(const Json& j) {
  OperadPresentation p;
  p.field = field_from_json(member(j, "field", "presentation"));
  const Json& gens = member(j, "generators", "presentation");
  if (!gens.is_array()) bad("generators", "expected a list");
  for (std::size_t k = 0; k < gens.size(); ++k) {
    std::string w = "generators[" + std::to_string(k) + "]";
    Generator g;
    g.label = string_of(member(gens[k], "label", w), w + ".label");
    g.arity = int_of(member(gens[k], "arity", w), w + ".arity");
    g.degree = gens[k].contains("degree") ? int_of(gens[k].at("degree"), w + ".degree") : 0;
    std::string s = gens[k].contains("symmetry") ? string_of(gens[k].at("symmetry"), w + ".symmetry") : "none";
    if (s == "symmetric")
      g.symmetry = Symmetry::symmetric;
    else if (s == "antisymmetric")
      g.symmetry = Symmetry::antisymmetric;
    else if (s == "none")
      g.symmetry = Symmetry::none;
    else
      bad(w + ".symmetry", "expected symmetric, antisymmetric or none");
    p.generators.push_back(g);
  }
  const Json& rels = member(j, "relations", "presentation");
  if (!rels.is_array()) bad("relations", "expected a list");
  for (std::size_t r = 0; r < rels.size(); ++r) {
    if (!rels[r].is_array()) bad("relations[" + std::to_string(r) + "]", "expected a list of terms");
    std::vector<RelationTerm> terms;
    for (std::size_t t = 0; t < rels[r].size(); ++t) {
      std::string w = "relations[" + std::to_string(r) + "][" + std::to_string(t) + "]";
      const Json& term = rels[r][t];
      std::vector<std::string> labels;
      const Json& vl = member(term, "vertexLabels", w);
      if (!vl.is_array()) bad(w + ".vertexLabels", "expected a list");
      for (const auto& l : vl) labels.push_back(string_of(l, w + ".vertexLabels"));
      std::size_t next = 0;
      ListedTree tree = tree_from_json(member(term, "tree", w), labels, next, w + ".tree");
      if (next != labels.size()) bad(w + ".vertexLabels", "more labels than vertices");
      Scalar c = term.contains("coeff") ? scalar_from_json(p.field, term.at("coeff"), w + ".coeff") : Scalar(1);
      terms.push_back({c, std::move(tree)});
    }
    p.relations.push_back(std::move(terms));
  }
  return p;
}

// ---------------------------------------------------------------------------

Json to_json(const SymSeqObject& x) {
  Json ar = Json::object();
  for (const auto& [n, c] : x.arities()) {
    Json degs = Json::object();
    for (std::size_t k = 0; k < c.dim(); ++k) degs[std::to_string(c.degrees[k])]["basis"].push_back(c.labels[k]);
    Json ts = Json::array();
    for (const Matrix& m : c.transpositions) {
      Json rows = Json::array();
      for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t jj = 0; jj < m.cols(); ++jj) row.push_back(scalar_to_string(m.at(i, jj)));
        rows.push_back(row);
      }
      ts.push_back(rows);
    }
    ar[std::to_string(n)] = {{"degrees", degs}, {"transpositions", ts}};
  }
  return {{"field", to_json(x.field())}, {"arities", ar}};
}

SymSeqObject symseq_from_json(const Json& j) {
  Field f = j.contains("field") ? field_from_json(j.at("field")) : Field();
  const Json& ar = member(j, "arities", "symmetric sequence");
  if (!ar.is_object()) bad("arities", "expected an object");
  std::map<int, Component> comps;
  int min_deg = -16, max_deg = 16, max_arity = 1;
  for (const auto& [key, val] : ar.items()) {
    int n = key_int(key, "arities");
    std::string w = "arities." + key;
    if (n < 0) bad(w, "negative arity");
    max_arity = std::max(max_arity, n);
    Component c;
    std::map<int, std::vector<std::string>> by_deg;
    const Json& degs = member(val, "degrees", w);
    if (!degs.is_object()) bad(w + ".degrees", "expected an object");
    for (const auto& [dk, dv] : degs.items()) {
      int d = key_int(dk, w + ".degrees");
      const Json& basis = member(dv, "basis", w + ".degrees." + dk);
      if (!basis.is_array()) bad(w + ".degrees." + dk + ".basis", "expected a list");
      for (const auto& b : basis) by_deg[d].push_back(string_of(b, w + ".degrees." + dk + ".basis"));
    }
    for (const auto& [d, labels] : by_deg) {
      min_deg = std::min(min_deg, d);
      max_deg = std::max(max_deg, d);
      for (const auto& l : labels) {
        c.labels.push_back(l);
        c.degrees.push_back(d);
      }
    }
    if (val.contains("transpositions")) {
      const Json& ts = val.at("transpositions");
      if (!ts.is_array()) bad(w + ".transpositions", "expected a list of matrices");
      for (const auto& m : ts) {
        if (!m.is_array() || m.size() != c.dim()) bad(w + ".transpositions", "matrix must have one row per basis element");
        Matrix mat(f, c.dim(), c.dim());
        for (std::size_t r = 0; r < m.size(); ++r) {
          if (!m[r].is_array() || m[r].size() != c.dim()) bad(w + ".transpositions", "matrix rows must be square");
          for (std::size_t col = 0; col < c.dim(); ++col) mat.set(r, col, scalar_from_json(f, m[r][col], w + ".transpositions"));
        }
        c.transpositions.push_back(std::move(mat));
      }
    }
    if (n >= 2 && c.transpositions.size() != static_cast<std::size_t>(n - 1)) {
      if (c.dim() == 0)
        c.transpositions.assign(static_cast<std::size_t>(n - 1), Matrix(f, 0, 0));
      else
        bad(w + ".transpositions", "arity " + key + " needs " + std::to_string(n - 1) + " matrices");
    }
    comps[n] = std::move(c);
  }
  SymSeqObject x(f, Window{max_arity, min_deg, max_deg});
  for (auto& [n, c] : comps) x.set_arity(n, std::move(c));
  x.validate();
  return x;
}

// ---------------------------------------------------------------------------

Json to_json(const LiePresentation& l) {
  Json basis = Json::array();
  for (std::size_t i = 0; i < l.dim(); ++i) basis.push_back({{"label", l.labels[i]}, {"degree", l.degrees[i]}});
  Json br = Json::array();
  for (const auto& [key, v] : l.bracket) {
    if (v.empty()) continue;
    Json val = Json::object();
    for (const auto& [k, c] : v) val[l.labels[k]] = scalar_to_string(c);
    br.push_back({{"left", l.labels[key.first]}, {"right", l.labels[key.second]}, {"value", val}});
  }
  return {{"field", to_json(l.field)}, {"basis", basis}, {"brackets", br}};
}

LiePresentation lie_from_json(const Json& j) {
  LiePresentation l;
  l.field = field_from_json(member(j, "field", "lie"));
  const Json& basis = member(j, "basis", "lie");
  if (!basis.is_array()) bad("basis", "expected a list");
  std::map<std::string, std::size_t> idx;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    std::string w = "basis[" + std::to_string(k) + "]";
    std::string label = string_of(member(basis[k], "label", w), w + ".label");
    if (idx.count(label)) bad(w + ".label", "duplicate label '" + label + "'");
    idx[label] = k;
    l.labels.push_back(label);
    l.degrees.push_back(int_of(member(basis[k], "degree", w), w + ".degree"));
  }
  auto find = [&](const Json& v, const std::string& w) {
    std::string s = string_of(v, w);
    auto it = idx.find(s);
    if (it == idx.end()) bad(w, "unknown basis label '" + s + "'");
    return it->second;
  };
  if (j.contains("brackets")) {
    const Json& br = j.at("brackets");
    if (!br.is_array()) bad("brackets", "expected a list");
    for (std::size_t k = 0; k < br.size(); ++k) {
      std::string w = "brackets[" + std::to_string(k) + "]";
      std::size_t a = find(member(br[k], "left", w), w + ".left");
      std::size_t b = find(member(br[k], "right", w), w + ".right");
      const Json& val = member(br[k], "value", w);
      if (!val.is_object()) bad(w + ".value", "expected an object label -> coefficient");
      std::map<std::size_t, Scalar> acc;
      for (const auto& [lab, c] : val.items()) {
        auto it = idx.find(lab);
        if (it == idx.end()) bad(w + ".value", "unknown basis label '" + lab + "'");
        acc[it->second] = scalar_from_json(l.field, c, w + ".value." + lab);
      }
      SparseVec v;
      for (const auto& [i, c] : acc)
        if (c != 0) v.emplace_back(i, c);
      if (a > b) {
        // store [e_b, e_a] = -(-1)^{|a||b|} [e_a, e_b]
        bool odd = (l.degrees[a] * l.degrees[b]) % 2 != 0;
        v = sv_scale(l.field, v, l.field.from_int(odd ? 1 : -1));
        std::swap(a, b);
      }
      if (l.bracket.count({a, b})) bad(w, "bracket given twice");
      l.bracket[{a, b}] = v;
    }
  }
  return l;
}

// ---------------------------------------------------------------------------

Json parse(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(what + ": malformed JSON (" + e.what() + ")");
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string Table::csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out += (k ? "," : "") + cells[k];
    out += "\n";
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

std::string Table::pretty() const {
  std::vector<std::size_t> w(columns.size(), 0);
  for (std::size_t k = 0; k < columns.size(); ++k) w[k] = columns[k].size();
  for (const auto& r : rows)
    for (std::size_t k = 0; k < r.size() && k < w.size(); ++k) w[k] = std::max(w[k], r[k].size());
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += "  ";
      out += std::string(w[k] - cells[k].size(), ' ') + cells[k];
    }
    out += "\n";
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

Json Table::to_json() const { return {{"columns", columns}, {"rows", rows}}; }

Table Table::from_json(const Json& j) {
  Table t;
  const Json& cols = member(j, "columns", "table");
  const Json& rows = member(j, "rows", "table");
  if (!cols.is_array() || !rows.is_array()) bad("table", "columns and rows must be lists");
  for (const auto& c : cols) t.columns.push_back(string_of(c, "table.columns"));
  for (const auto& r : rows) {
    if (!r.is_array() || r.size() != t.columns.size()) bad("table.rows", "row width differs from columns");
    std::vector<std::string> row;
    for (const auto& c : r) row.push_back(string_of(c, "table.rows"));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table arity_table(const SymSeqObject& x, int from) {
  Table t{{"arity", "degree", "dim"}, {}};
  for (const auto& [n, c] : x.arities()) {
    if (n < from) continue;
    for (const auto& [d, k] : c.degree_dims())
      if (k) t.rows.push_back({std::to_string(n), std::to_string(d), std::to_string(k)});
  }
  return t;
}

Table degree_table(const std::vector<std::size_t>& dims, int from) {
  Table t{{"degree", "dim"}, {}};
  for (std::size_t d = static_cast<std::size_t>(std::max(from, 0)); d < dims.size(); ++d) t.rows.push_back({std::to_string(d), std::to_string(dims[d])});
  return t;
}

}  // namespace opkit::io
