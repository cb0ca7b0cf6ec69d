#include <doctest.h>

#include <sstream>

#include "cli.hpp"
#include "opkit/io.hpp"
#include "opkit/koszul.hpp"

using namespace opkit;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(OPKIT_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("dual of comm-nu as CSV") {
  Run r = run({"dual", "--operad", "comm-nu", "--max-arity", "4", "--field", "q", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out == "arity,degree,dim\n2,1,1\n3,2,2\n4,3,6\n");
}

TEST_CASE("compose comm-nu with itself gives Bell numbers") {
  Run r = run({"compose", "--left", "comm-nu", "--right", "comm-nu", "--max-arity", "4", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out == "arity,degree,dim\n1,0,1\n2,0,2\n3,0,5\n4,0,15\n");
}

TEST_CASE("primitives in characteristic 2") {
  Run r = run({"primitives", "--char", "2", "--gens", "1:1", "--max-degree", "8", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out == "degree,dim\n1,1\n2,1\n3,0\n4,1\n5,0\n6,0\n7,0\n8,1\n");
}

TEST_CASE("output is byte-identical across runs") {
  for (auto args : std::vector<std::vector<std::string>>{{"dual", "--operad", "lie", "--max-arity", "4", "--format", "json"},
                                                         {"norm", "--left", "comm-nu", "--right", "lie", "--max-arity", "4", "--char", "3"},
                                                         {"mm-check", "--lie", "free", "--gens", "1:2", "--max-degree", "4"}}) {
    Run a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("emitted JSON parses back to the same value") {
  Run r = run({"dual", "--operad", "comm-nu", "--max-arity", "4", "--format", "json"});
  REQUIRE(r.code == 0);
  SymSeqObject x = io::symseq_from_json(io::parse(r.out, "output"));
  CHECK(io::to_json(x).dump(2) + "\n" == r.out);
  Window w{4, -16, 16};
  Operad c = comm_nu(Field(), w);
  CHECK(x == koszul_dual(c, w, false).homology);

  Run t = run({"primitives", "--char", "3", "--gens", "2:1", "--max-degree", "6", "--format", "json"});
  REQUIRE(t.code == 0);
  io::Table table = io::Table::from_json(io::parse(t.out, "output"));
  CHECK(table.columns == std::vector<std::string>{"degree", "dim"});
  CHECK(table.to_json().dump(2) + "\n" == t.out);
}

TEST_CASE("presentation JSON round trip") {
  for (const auto& p : {lie_presentation(Field()), ass_presentation(Field::prime(3)), comm_presentation(Field())}) {
    io::Json j = io::to_json(p);
    OperadPresentation q = io::presentation_from_json(j);
    CHECK(io::to_json(q) == j);
    Window w{4, -16, 16};
    CHECK(presented_operad(p, w).operad.seq() == presented_operad(q, w).operad.seq());
  }
}

TEST_CASE("Lie algebra and sequence JSON round trip") {
  for (const auto& l : {heisenberg_lie(Field(), 2), free_lie(Field::prime(3), GradedSpace{{{1, {"a", "b"}}}}, 4)}) {
    io::Json j = io::to_json(l);
    LiePresentation m = io::lie_from_json(j);
    CHECK(m.labels == l.labels);
    CHECK(m.degrees == l.degrees);
    CHECK(io::to_json(m) == j);
  }
  Operad lie = builtin("lie", Field::prime(5), Window{4, -16, 16});
  CHECK(io::symseq_from_json(io::to_json(lie.seq())) == lie.seq());
}

TEST_CASE("presentation files") {
  Run d = run({"dual", "--operad", data("lie_operad.json"), "--max-arity", "4", "--format", "csv"});
  CHECK(d.code == 0);
  CHECK(d.out == "arity,degree,dim\n2,1,1\n3,2,1\n4,3,1\n");
  Run c = run({"check", "--operad", data("lie_operad.json"), "--max-arity", "5", "--format", "csv"});
  CHECK(c.code == 0);
  Run e = run({"envelope", "--lie", data("heisenberg.json"), "--max-degree", "6", "--format", "csv"});
  CHECK(e.out == "degree,dim\n0,1\n1,0\n2,2\n3,0\n4,4\n5,0\n6,6\n");
}

TEST_CASE("exit codes and diagnostics") {
  Run unknown = run({"frobnicate"});
  CHECK(unknown.code == 2);
  Run none = run({});
  CHECK(none.code == 2);
  Run overflow = run({"dual", "--operad", "comm-nu", "--max-arity", "9"});
  CHECK(overflow.code == 2);
  CHECK(overflow.err.find("--max-arity") != std::string::npos);
  Run malformed = run({"check", "--operad", data("malformed.json")});
  CHECK(malformed.code == 2);
  CHECK(malformed.err.find("malformed JSON") != std::string::npos);
  Run inconsistent = run({"check", "--operad", data("inconsistent.json")});
  CHECK(inconsistent.code == 3);
  Run name = run({"dual", "--operad", "nonesuch"});
  CHECK(name.code == 2);
  CHECK(name.err.find("nonesuch") != std::string::npos);
  Run gens = run({"primitives", "--gens", "0:1"});
  CHECK(gens.code == 2);
  Run field = run({"primitives", "--field", "f4", "--gens", "1:1"});
  CHECK(field.code == 2);
  Run cost = run({"dual", "--operad", "ass-nu", "--max-arity", "7"});
  CHECK(cost.code == 2);
  CHECK(cost.err.find("cells") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("norm witnesses") {
  CHECK(run({"norm", "--module", "trivial", "--order", "2", "--char", "2", "--format", "csv"}).out == "arity,blocks,dim,is_iso\n2,2,1,no\n");
  CHECK(run({"norm", "--module", "trivial", "--order", "3", "--char", "3", "--format", "csv"}).out == "arity,blocks,dim,is_iso\n3,3,1,no\n");
  CHECK(run({"norm", "--module", "regular", "--order", "3", "--char", "3", "--format", "csv"}).out == "arity,blocks,dim,is_iso\n3,3,6,yes\n");
  CHECK(run({"norm", "--module", "trivial", "--order", "3", "--format", "csv"}).out == "arity,blocks,dim,is_iso\n3,3,1,yes\n");
}

TEST_CASE("golden corpus") {
  Run r = run({"--seed-corpus", OPKIT_TEST_CORPUS});
  INFO(r.out);
  CHECK(r.code == 0);
}
