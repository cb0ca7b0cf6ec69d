#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "opkit/hopf.hpp"
#include "opkit/io.hpp"
#include "opkit/koszul.hpp"

namespace py = pybind11;
using namespace opkit;

namespace {

using Dims = std::map<int, std::map<int, std::size_t>>;  // arity -> degree -> dim

Window window(int max_arity) {
  Window w{max_arity, -16, 16};
  w.validate();
  return w;
}

Dims arity_dims(const SymSeqObject& x) {
  Dims r;
  for (const auto& [n, c] : x.arities())
    if (c.dim() > 0) r[n] = c.degree_dims();
  return r;
}

Operad load_operad(const std::string& name, const Field& f, const Window& w) {
  if (name.find('{') == std::string::npos) return builtin(name, f, w);
  return presented_operad(io::presentation_from_json(io::parse(name, "presentation")), w).operad;
}

GradedSpace space(const std::vector<std::pair<int, int>>& gens) {
  GradedSpace v;
  int k = 0;
  for (auto [d, c] : gens) {
    if (d < 1 || c < 0) throw ValidationError("generators: degrees must be >= 1 and counts >= 0");
    for (int i = 0; i < c; ++i) v.degrees[d].push_back("x" + std::to_string(k++));
  }
  return v;
}

LiePresentation make_lie(const std::string& kind, const Field& f, const std::vector<std::pair<int, int>>& gens, int degree,
                         int max_degree) {
  if (kind == "abelian") return abelian_lie(f, space(gens));
  if (kind == "heisenberg") return heisenberg_lie(f, degree);
  if (kind == "free") return free_lie(f, space(gens), max_degree);
  return io::lie_from_json(io::parse(kind, "lie algebra"));
}

py::dict milnor_moore(const std::string& kind, int max_degree, const std::string& field,
                      const std::vector<std::pair<int, int>>& gens, int degree) {
  Field f = Field::parse(field);
  MilnorMooreReport r = milnor_moore_check(make_lie(kind, f, gens, degree, max_degree), max_degree);
  py::list degs;
  for (const auto& d : r.degrees) {
    py::dict e;
    e["degree"] = d.degree;
    e["lie_dim"] = d.lie_dim;
    e["primitive_dim"] = d.primitive_dim;
    e["iso"] = d.iso;
    degs.append(e);
  }
  py::dict out;
  out["iso"] = r.iso;
  out["generated_by_primitives"] = r.generated_by_primitives;
  out["envelope_dims"] = r.envelope_dims;
  out["degrees"] = degs;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Operads, Koszul duality and graded Hopf algebras over Q and F_p";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<AxiomError>(m, "AxiomError", PyExc_ArithmeticError);

  m.def("builtin_operads", &builtin_names);

  m.def(
      "koszul_dual",
      [](const std::string& operad, int max_arity, const std::string& field) {
        Field f = Field::parse(field);
        Window w = window(max_arity);
        return arity_dims(koszul_dual(load_operad(operad, f, w), w, false).homology);
      },
      py::arg("operad"), py::arg("max_arity") = 4, py::arg("field") = "Q",
      "Homology of Bar(triv, O, triv) as {arity: {degree: dim}}. `operad` is a built-in name or presentation JSON.");

  m.def(
      "compose",
      [](const std::string& left, const std::string& right, int max_arity, const std::string& field) {
        Field f = Field::parse(field);
        Window w = window(max_arity);
        return arity_dims(compose(load_operad(left, f, w).seq(), load_operad(right, f, w).seq(), w));
      },
      py::arg("left"), py::arg("right"), py::arg("max_arity") = 4, py::arg("field") = "Q");

  m.def(
      "operad_dims",
      [](const std::string& operad, int max_arity, const std::string& field) {
        Field f = Field::parse(field);
        Window w = window(max_arity);
        return arity_dims(load_operad(operad, f, w).seq());
      },
      py::arg("operad"), py::arg("max_arity") = 4, py::arg("field") = "Q");

  m.def(
      "check_operad",
      [](const std::string& operad, int max_arity, const std::string& field) {
        Field f = Field::parse(field);
        Window w = window(max_arity);
        OperadReport r = check_operad(load_operad(operad, f, w));
        std::vector<std::string> failures;
        for (const auto& fl : r.failures) failures.push_back(fl.axiom + ": " + fl.detail);
        return py::make_tuple(r.valid, failures);
      },
      py::arg("operad"), py::arg("max_arity") = 4, py::arg("field") = "Q");

  m.def(
      "double_dual",
      [](const std::string& operad, int max_arity, const std::string& field) {
        Field f = Field::parse(field);
        Window w = window(max_arity);
        DoubleDualReport r = double_dual_check(load_operad(operad, f, w), w);
        Dims computed;
        for (const auto& a : r.arities) computed[a.arity] = a.computed;
        return py::make_tuple(r.ok, computed);
      },
      py::arg("operad"), py::arg("max_arity") = 4, py::arg("field") = "Q");

  m.def(
      "truncation_tower",
      [](const std::string& operad, int max_arity, int stages, const std::string& field) {
        Field f = Field::parse(field);
        Window w = window(max_arity);
        TowerReport r = truncation_tower(load_operad(operad, f, w), w, stages);
        py::list out;
        for (const auto& st : r.stages) {
          py::dict s;
          s["m"] = st.m;
          Dims d;
          for (const auto& [n, h] : st.per_arity) d[n] = h.dims();
          s["homology"] = d;
          s["concentrated"] = st.concentrated;
          s["fiber_matches"] = st.fiber_matches;
          s["les_consistent"] = st.les_consistent;
          out.append(s);
        }
        return out;
      },
      py::arg("operad"), py::arg("max_arity") = 4, py::arg("stages") = 2, py::arg("field") = "Q");

  m.def(
      "norm_is_iso",
      [](const std::string& module, int order, const std::string& field) {
        Field f = Field::parse(field);
        if (order < 1 || order > 5) throw ValidationError("order must be in 1..5");
        if (module != "trivial" && module != "sign" && module != "regular")
          throw ValidationError("module must be trivial, sign or regular");
        std::vector<Perm> elems = perm::all(order);
        std::vector<Matrix> ts;
        std::size_t dim = module == "regular" ? elems.size() : 1;
        for (int t = 0; t + 1 < order; ++t) {
          if (module == "trivial") {
            ts.push_back(Matrix::identity(f, 1));
          } else if (module == "sign") {
            ts.push_back(Matrix::from_ints(f, {{-1}}));
          } else {
            std::vector<SparseVec> cols;
            for (const Perm& g : elems) {
              Perm h = perm::compose(perm::transposition(order, t), g);
              std::size_t j = 0;
              while (elems[j] != h) ++j;
              cols.push_back({{j, Scalar(1)}});
            }
            ts.push_back(Matrix::from_columns(f, dim, cols));
          }
        }
        return norm_map(f, order, dim, ts).is_iso;
      },
      py::arg("module"), py::arg("order"), py::arg("field") = "Q");

  m.def(
      "primitive_dims",
      [](const std::vector<std::pair<int, int>>& gens, int max_degree, const std::string& field) {
        return primitive_dims(tensor_hopf(Field::parse(field), space(gens), max_degree));
      },
      py::arg("gens"), py::arg("max_degree"), py::arg("field") = "Q",
      "Dimensions of the primitives of T(V) in degrees 0..max_degree; gens is [(degree, count)].");

  m.def(
      "envelope_dims",
      [](const std::string& kind, int max_degree, const std::string& field, const std::vector<std::pair<int, int>>& gens,
         int degree) {
        Field f = Field::parse(field);
        return enveloping(make_lie(kind, f, gens, degree, max_degree), max_degree).hopf.dims();
      },
      py::arg("lie"), py::arg("max_degree"), py::arg("field") = "Q", py::arg("gens") = std::vector<std::pair<int, int>>{},
      py::arg("degree") = 2, "lie is abelian, heisenberg, free, or Lie algebra JSON.");

  m.def("milnor_moore", &milnor_moore, py::arg("lie"), py::arg("max_degree"), py::arg("field") = "Q",
        py::arg("gens") = std::vector<std::pair<int, int>>{}, py::arg("degree") = 2);

  m.def("witt_number", &witt_number, py::arg("d"), py::arg("n"));
}
