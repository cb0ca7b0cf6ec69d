#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "opkit/hopf.hpp"
#include "opkit/io.hpp"
#include "opkit/koszul.hpp"

namespace opkit::cli {

namespace {

using io::Json;
using io::Table;

constexpr int kMaxArity = 7;
constexpr int kMaxDegreeSpan = 32;

struct Options {
  std::string field = "q";
  int characteristic = -1;
  int max_arity = 4;
  int min_deg = -16, max_deg = 16;
  std::string format = "table";
  std::string operad, left, right, lie, gens, module;
  int max_degree = 6;
  int stage = 1;
  int order = 2;
};

Field field_of(const Options& o) {
  if (o.characteristic >= 0) {
    if (o.field != "q") throw ValidationError("--char and --field both given");
    return o.characteristic == 0 ? Field() : Field::prime(static_cast<std::uint32_t>(o.characteristic));
  }
  return Field::parse(o.field);
}

bool field_given(const Options& o) { return o.characteristic >= 0 || o.field != "q"; }

Window window_of(const Options& o) {
  if (o.max_arity < 1 || o.max_arity > kMaxArity)
    throw ValidationError("--max-arity: " + std::to_string(o.max_arity) + " outside 1.." + std::to_string(kMaxArity));
  if (o.max_deg < o.min_deg || o.max_deg - o.min_deg > kMaxDegreeSpan)
    throw ValidationError("--degrees: span must be between 0 and " + std::to_string(kMaxDegreeSpan));
  return Window{o.max_arity, o.min_deg, o.max_deg};
}

int max_degree_of(const Options& o) {
  if (o.max_degree < 0 || o.max_degree > kMaxDegreeSpan) throw ValidationError("--max-degree: outside 0.." + std::to_string(kMaxDegreeSpan));
  return o.max_degree;
}

GradedSpace gens_of(const std::string& text) {
  if (text.empty()) throw ValidationError("--gens: required, as deg:count[,deg:count...]");
  GradedSpace v;
  std::stringstream ss(text);
  std::string item;
  int k = 0;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    int d = 0, c = 0;
    try {
      if (colon == std::string::npos) throw std::invalid_argument("");
      std::size_t p1 = 0, p2 = 0;
      d = std::stoi(item.substr(0, colon), &p1);
      c = std::stoi(item.substr(colon + 1), &p2);
      if (p1 != colon || p2 != item.size() - colon - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ValidationError("--gens: cannot parse '" + item + "' (expected deg:count)");
    }
    if (d < 1 || c < 0) throw ValidationError("--gens: degrees must be >= 1 and counts >= 0");
    for (int i = 0; i < c; ++i) v.degrees[d].push_back("x" + std::to_string(k++));
  }
  return v;
}

bool is_file_ref(const std::string& s) {
  return (!s.empty() && s[0] == '@') || (s.size() > 5 && s.substr(s.size() - 5) == ".json");
}

Json load_ref(const std::string& s) { return io::read_file(s[0] == '@' ? s.substr(1) : s); }

Operad operad_of(const std::string& name, const Options& o, const char* flag) {
  if (name.empty()) throw ValidationError(std::string(flag) + ": required");
  Window w = window_of(o);
  if (!is_file_ref(name)) return builtin(name, field_of(o), w);
  OperadPresentation p = io::presentation_from_json(load_ref(name));
  if (field_given(o) && !(field_of(o) == p.field)) throw ValidationError(std::string(flag) + ": presentation field differs from --field");
  return presented_operad(p, w).operad;
}

SymSeqObject sequence_of(const std::string& name, const Options& o, const char* flag) {
  if (is_file_ref(name)) {
    Json j = load_ref(name);
    if (j.contains("arities")) {
      SymSeqObject x = io::symseq_from_json(j);
      if (field_given(o) && !(field_of(o) == x.field())) throw ValidationError(std::string(flag) + ": sequence field differs from --field");
      return x;
    }
  }
  return operad_of(name, o, flag).seq();
}

LiePresentation lie_of(const Options& o) {
  int D = max_degree_of(o);
  if (o.lie.empty()) throw ValidationError("--lie: required (abelian, heisenberg, free or a JSON file)");
  if (o.lie == "abelian") return abelian_lie(field_of(o), gens_of(o.gens));
  if (o.lie == "free") return free_lie(field_of(o), gens_of(o.gens), D);
  if (o.lie == "heisenberg") {
    int k = 2;
    if (!o.gens.empty()) {
      GradedSpace v = gens_of(o.gens);
      if (v.degrees.size() != 1 || v.total_dim() != 2) throw ValidationError("--gens: heisenberg takes k:2");
      k = v.degrees.begin()->first;
    }
    return heisenberg_lie(field_of(o), k);
  }
  if (!is_file_ref(o.lie)) throw ValidationError("--lie: unknown Lie algebra '" + o.lie + "'");
  LiePresentation l = io::lie_from_json(load_ref(o.lie));
  if (field_given(o) && !(field_of(o) == l.field)) throw ValidationError("--lie: field differs from --field");
  return l;
}

void emit(std::ostream& out, const Options& o, const Table& t, const std::optional<Json>& json = std::nullopt) {
  if (o.format == "csv")
    out << t.csv();
  else if (o.format == "json")
    out << (json ? *json : t.to_json()).dump(2) << "\n";
  else
    out << t.pretty();
}

std::string yes(bool b) { return b ? "yes" : "no"; }

// --- commands --------------------------------------------------------------

int cmd_dual(const Options& o, std::ostream& out) {
  Operad op = operad_of(o.operad, o, "--operad");
  KoszulDual k = koszul_dual(op, window_of(o), false);
  emit(out, o, io::arity_table(k.homology, 2), io::to_json(k.homology));
  return kOk;
}

int cmd_compose(const Options& o, std::ostream& out) {
  SymSeqObject x = sequence_of(o.left, o, "--left");
  SymSeqObject y = sequence_of(o.right, o, "--right");
  if (!(x.field() == y.field())) throw ValidationError("--right: field differs from --left");
  SymSeqObject c = compose(x, y, window_of(o));
  emit(out, o, io::arity_table(c, 1), io::to_json(c));
  return kOk;
}

int cmd_tower(const Options& o, std::ostream& out) {
  Operad op = operad_of(o.operad, o, "--operad");
  TowerReport r = truncation_tower(op, window_of(o), o.stage);
  const TowerStage& s = r.stages.back();
  emit(out, o, io::arity_table(s.homology, 1), io::to_json(s.homology));
  return kOk;
}

int cmd_primitives(const Options& o, std::ostream& out) {
  HopfPresentation t = tensor_hopf(field_of(o), gens_of(o.gens), max_degree_of(o));
  emit(out, o, io::degree_table(primitive_dims(t), 1));
  return kOk;
}

int cmd_envelope(const Options& o, std::ostream& out) {
  Envelope e = enveloping(lie_of(o), max_degree_of(o));
  emit(out, o, io::degree_table(e.hopf.dims(), 0));
  return kOk;
}

int cmd_mm_check(const Options& o, std::ostream& out) {
  MilnorMooreReport r = milnor_moore_check(lie_of(o), max_degree_of(o));
  Table t{{"degree", "lie_dim", "primitive_dim", "iso", "generated"}, {}};
  for (const auto& d : r.degrees)
    t.rows.push_back({std::to_string(d.degree), std::to_string(d.lie_dim), std::to_string(d.primitive_dim), yes(d.iso), yes(d.generated)});
  emit(out, o, t);
  return kOk;
}

int cmd_norm(const Options& o, std::ostream& out) {
  Table t{{"arity", "blocks", "dim", "is_iso"}, {}};
  if (!o.module.empty()) {
    Field f = field_of(o);
    int k = o.order;
    if (k < 1 || k > 5) throw ValidationError("--order: outside 1..5");
    std::vector<Matrix> ts;
    std::size_t dim = 1;
    if (o.module == "trivial" || o.module == "sign") {
      for (int i = 0; i + 1 < k; ++i) ts.push_back(Matrix::identity(f, 1).scaled(f.from_int(o.module == "sign" ? -1 : 1)));
    } else if (o.module == "regular") {
      auto perms = perm::all(k);
      dim = perms.size();
      std::map<Perm, std::size_t> idx;
      for (std::size_t a = 0; a < perms.size(); ++a) idx[perms[a]] = a;
      for (int i = 0; i + 1 < k; ++i) {
        Perm s(static_cast<std::size_t>(k));
        for (int a = 0; a < k; ++a) s[static_cast<std::size_t>(a)] = a;
        std::swap(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(i + 1)]);
        Matrix m(f, dim, dim);
        for (std::size_t a = 0; a < dim; ++a) m.set(idx.at(perm::compose(s, perms[a])), a, Scalar(1));
        ts.push_back(std::move(m));
      }
    } else {
      throw ValidationError("--module: expected trivial, sign or regular");
    }
    NormMapResult r = norm_map(f, k, dim, ts);
    t.rows.push_back({std::to_string(k), std::to_string(k), std::to_string(dim), yes(r.is_iso)});
  } else {
    SymSeqObject x = sequence_of(o.left, o, "--left");
    SymSeqObject y = sequence_of(o.right, o, "--right");
    for (int n = 1; n <= o.max_arity; ++n)
      for (int k = 2; k <= n; ++k) {
        SummandRep s = compose_summand(x, y, n, k);
        if (s.dim == 0) continue;
        NormMapResult r = norm_map(x.field(), k, s.dim, s.transpositions);
        t.rows.push_back({std::to_string(n), std::to_string(k), std::to_string(s.dim), yes(r.is_iso)});
      }
  }
  emit(out, o, t);
  return kOk;
}

int cmd_double_dual(const Options& o, std::ostream& out) {
  Operad op = operad_of(o.operad, o, "--operad");
  DoubleDualReport r = double_dual_check(op, window_of(o));
  Table t{{"arity", "degree", "expected", "computed", "match"}, {}};
  for (const auto& a : r.arities) {
    std::set<int> degs;
    for (const auto& [d, k] : a.expected) degs.insert(d);
    for (const auto& [d, k] : a.computed) degs.insert(d);
    for (int d : degs) {
      auto get = [&](const std::map<int, std::size_t>& m) { return m.count(d) ? m.at(d) : 0; };
      t.rows.push_back({std::to_string(a.arity), std::to_string(d), std::to_string(get(a.expected)), std::to_string(get(a.computed)),
                        yes(a.dims_match && a.characters_match)});
    }
  }
  emit(out, o, t);
  return kOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  Table t{{"check", "status", "detail"}, {}};
  bool ok = true;
  if (!o.lie.empty()) {
    LiePresentation l = lie_of(o);
    LieReport r = check_lie(l);
    t.rows.push_back({"lie", r.valid ? "valid" : "invalid", r.valid ? "" : r.failures.front()});
    ok = r.valid;
    if (ok) {
      HopfReport h = check_hopf(enveloping(l, max_degree_of(o)).hopf);
      t.rows.push_back({"envelope-hopf", h.valid ? "valid" : "invalid", h.valid ? "" : h.failures.front()});
      ok = h.valid;
    }
  } else if (!o.gens.empty()) {
    HopfReport h = check_hopf(tensor_hopf(field_of(o), gens_of(o.gens), max_degree_of(o)));
    t.rows.push_back({"tensor-hopf", h.valid ? "valid" : "invalid", h.valid ? "" : h.failures.front()});
    ok = h.valid;
  } else {
    Operad op = operad_of(o.operad, o, "--operad");
    OperadReport r = check_operad(op);
    if (r.valid) t.rows.push_back({"operad", "valid", std::to_string(r.instances_checked) + " instances"});
    for (const auto& f : r.failures)
      t.rows.push_back({f.axiom, "invalid", "m=" + std::to_string(f.m) + " i=" + std::to_string(f.i) + " n=" + std::to_string(f.n) + " " + f.detail});
    ok = r.valid;
  }
  emit(out, o, t);
  return ok ? kOk : kAxiomFailure;
}

// --- golden corpus ----------------------------------------------------------

int run_corpus(const std::string& dir, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    err << "error: --seed-corpus: '" << dir << "' is not a directory\n";
    return kInvalidInput;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  struct Result {
    bool ok = false;
    std::string note;
  };
  std::vector<Result> results(files.size());
  auto job = [&](std::size_t k) {
    try {
      Json j = io::read_file(files[k].string());
      std::vector<std::string> args;
      for (const auto& a : j.at("args")) args.push_back(a.get<std::string>());
      std::ostringstream o, e;
      int code = run(args, o, e);
      int want = j.value("exit", 0);
      bool ok = code == want && o.str() == j.at("expected").get<std::string>();
      results[k] = {ok, ok ? "" : "exit " + std::to_string(code) + (e.str().empty() ? "" : ": " + e.str().substr(0, e.str().find('\n')))};
    } catch (const std::exception& e) {
      results[k] = {false, e.what()};
    }
  };
  unsigned threads = 1;
  if (const char* env = std::getenv("OPKIT_THREADS")) threads = static_cast<unsigned>(std::max(1, std::atoi(env)));
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (unsigned t = 0; t < std::min<std::size_t>(threads, files.size()); ++t)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < files.size(); k = next++) job(k);
    });
  for (auto& th : pool) th.join();

  bool all = true;
  for (std::size_t k = 0; k < files.size(); ++k) {
    out << (results[k].ok ? "ok   " : "FAIL ") << files[k].filename().string();
    if (!results[k].ok) out << "  " << results[k].note;
    out << "\n";
    all = all && results[k].ok;
  }
  out << files.size() << " cases, " << (all ? "all passed" : "failures") << "\n";
  return all ? kOk : kAxiomFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite computations with operads, bar constructions and Hopf algebras"};
  app.name("opkit");
  Options o;
  std::string corpus;
  app.add_option("--seed-corpus", corpus, "Run the golden cases in a directory");

  auto common = [&](CLI::App* c) {
    c->add_option("--field", o.field, "q or a prime (f2, 3, ...)");
    c->add_option("--char", o.characteristic, "Characteristic (0 or a prime)");
    c->add_option("--format", o.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
  };
  auto windowed = [&](CLI::App* c) {
    common(c);
    c->add_option("--max-arity", o.max_arity, "Largest arity computed");
    c->add_option("--min-degree", o.min_deg, "Lower degree bound");
    c->add_option("--max-degree", o.max_deg, "Upper degree bound");
  };
  auto graded = [&](CLI::App* c) {
    common(c);
    c->add_option("--max-degree", o.max_degree, "Truncation degree D");
  };

  auto* dual = app.add_subcommand("dual", "Koszul dual: homology of Bar(triv, O, triv)");
  windowed(dual);
  dual->add_option("--operad", o.operad, "Built-in name or presentation JSON file");
  auto* comp = app.add_subcommand("compose", "Composition product of two symmetric sequences");
  windowed(comp);
  comp->add_option("--left", o.left, "Built-in operad or JSON file");
  comp->add_option("--right", o.right, "Built-in operad or JSON file");
  auto* tower = app.add_subcommand("tower", "Homology of tau_m(O) o_O triv");
  windowed(tower);
  tower->add_option("--operad", o.operad, "Built-in name or presentation JSON file");
  tower->add_option("--stage", o.stage, "Truncation stage m");
  auto* prim = app.add_subcommand("primitives", "Primitive dimensions of T(V)");
  graded(prim);
  prim->add_option("--gens", o.gens, "Generators as deg:count[,deg:count]");
  auto* env = app.add_subcommand("envelope", "Dimensions of U(L)");
  graded(env);
  env->add_option("--lie", o.lie, "abelian, heisenberg, free or a Lie JSON file");
  env->add_option("--gens", o.gens, "Generators as deg:count[,deg:count]");
  auto* mm = app.add_subcommand("mm-check", "Compare L with Prim U(L) degree by degree");
  graded(mm);
  mm->add_option("--lie", o.lie, "abelian, heisenberg, free or a Lie JSON file");
  mm->add_option("--gens", o.gens, "Generators as deg:count[,deg:count]");
  auto* norm = app.add_subcommand("norm", "Norm maps on the summands of a composition product");
  windowed(norm);
  norm->add_option("--left", o.left, "Built-in operad or JSON file");
  norm->add_option("--right", o.right, "Built-in operad or JSON file");
  norm->add_option("--module", o.module, "trivial, sign or regular Sigma_k-module");
  norm->add_option("--order", o.order, "k for --module");
  auto* dd = app.add_subcommand("double-dual", "Cobar of the Koszul dual compared with O");
  windowed(dd);
  dd->add_option("--operad", o.operad, "Built-in name or presentation JSON file");
  auto* check = app.add_subcommand("check", "Axiom checks for an operad, a Lie algebra or T(V)");
  windowed(check);
  check->add_option("--operad", o.operad, "Built-in name or presentation JSON file");
  check->add_option("--lie", o.lie, "abelian, heisenberg, free or a Lie JSON file");
  check->add_option("--gens", o.gens, "Generators as deg:count[,deg:count]");
  check->add_option("--truncate", o.max_degree, "Degree D for Hopf checks");
  app.require_subcommand(0, 1);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    if (!corpus.empty()) return run_corpus(corpus, out, err);
    auto subs = app.get_subcommands();
    if (subs.empty()) {
      err << "error: no command given (dual, compose, tower, primitives, envelope, mm-check, norm, double-dual, check)\n";
      return kInvalidInput;
    }
    const std::string name = subs.front()->get_name();
    if (name == "dual") return cmd_dual(o, out);
    if (name == "compose") return cmd_compose(o, out);
    if (name == "tower") return cmd_tower(o, out);
    if (name == "primitives") return cmd_primitives(o, out);
    if (name == "envelope") return cmd_envelope(o, out);
    if (name == "mm-check") return cmd_mm_check(o, out);
    if (name == "norm") return cmd_norm(o, out);
    if (name == "double-dual") return cmd_double_dual(o, out);
    return cmd_check(o, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const AxiomError& e) {
    err << "axiom failure: " << e.what() << "\n";
    return kAxiomFailure;
  }
}

}  // namespace opkit::cli
