#include <algorithm>
#include <memory>
#include <set>

#include "opkit/koszul.hpp"

namespace opkit {

namespace {

// The cooperad induced on tree-bar homology through chosen retractions.
Cooperad induced_cooperad(const TreeBar& tb, const Window& w, const std::string& name) {
  const Operad& o = tb.operad();
  const Field& f = o.field();
  int N = tb.max_arity();
  Cooperad c;
  c.name = "co" + name;
  c.seq = SymSeqObject(f, w);
  std::map<int, ArityHomology> hs;
  std::map<int, std::map<int, std::size_t>> offset;  // arity -> degree -> basis offset
  for (int n = 1; n <= N; ++n) {
    ArityHomology ah = homology_with_action(tb.complex(n), n, [&](int d, int t) { return tb.action(n, d, t); }, true);
    std::size_t off = 0, used = 0;
    for (const auto& [d, h] : ah.homology.degrees) {
      if (h.dim == 0) continue;
      offset[n][d] = off;
      off += h.dim;
      ++used;
    }
    if (used > 1) throw AxiomError("Koszul dual of " + o.name() + ": arity " + std::to_string(n) + " is not concentrated in one degree");
    if (ah.component.dim() > 0) c.seq.set_arity(n, ah.component);
    hs.emplace(n, std::move(ah));
  }
  if (c.seq.dim(1) != 1) throw AxiomError("Koszul dual of " + o.name() + ": arity 1 is not one-dimensional");
  c.counit = 0;

  // Images of basis cells under the retractions, cached per (arity, degree, cell).
  std::map<std::tuple<int, int, std::size_t>, SparseVec> pi_cache;
  auto pi = [&](int n, int d, std::size_t cell) -> const SparseVec& {
    auto key = std::make_tuple(n, d, cell);
    auto it = pi_cache.find(key);
    if (it != pi_cache.end()) return it->second;
    const auto& rs = hs.at(n).retractions;
    SparseVec v;
    auto rt = rs.find(d);
    if (rt != rs.end()) {
      std::size_t off = offset[n][d];
      for (auto& [i, x] : rt->second.apply(SparseVec{{cell, Scalar(1)}})) v.emplace_back(off + i, x);
    }
    return pi_cache.emplace(key, std::move(v)).first->second;
  };

  for (int m = 1; m <= N; ++m)
    for (int k = 1; m + k - 1 <= N; ++k)
      for (int i = 0; i < m; ++i) {
        int n = m + k - 1;
        std::size_t dm = c.seq.dim(m), dk = c.seq.dim(k), dn = c.seq.dim(n);
        Matrix delta(f, dm * dk, dn);
        for (const auto& [d, h] : hs.at(n).homology.degrees) {
          if (h.dim == 0) continue;
          std::size_t off = offset[n][d];
          for (std::size_t col = 0; col < h.dim; ++col) {
            auto parts = tb.cocompose(m, i, k, d, h.representatives.column(col));
            for (const auto& [degs, terms] : parts)
              for (const auto& [cells, coeff] : terms) {
                const SparseVec& p1 = pi(m, degs.first, cells.first);
                const SparseVec& p2 = pi(k, degs.second, cells.second);
                for (const auto& [a, va] : p1)
                  for (const auto& [b, vb] : p2) delta.add_to(a * dk + b, off + col, f.mul(coeff, f.mul(va, vb)));
              }
          }
        }
        c.cocompositions[{m, i, k}] = std::move(delta);
      }
  return c;
}

std::size_t induced_rank(const HomologyDegree* h, const Matrix& map, const ChainComplex& target, int d) {
  if (h == nullptr || h->dim == 0) return 0;
  Matrix images = map * h->representatives;
  Matrix b = target.d(d + 1);
  if (b.rows() != target.dim(d)) b = Matrix(target.field(), target.dim(d), 0);
  return rank(b.hstack(images)) - rank(b);
}

const HomologyDegree* find_degree(const Homology& h, int d) {
  auto it = h.degrees.find(d);
  return it == h.degrees.end() ? nullptr : &it->second;
}

std::size_t hdim(const Homology& h, int d) {
  const HomologyDegree* p = find_degree(h, d);
  return p ? p->dim : 0;
}

}  // namespace

KoszulDual koszul_dual(const Operad& o, const Window& w, bool with_structure) {
  KoszulDual out;
  RelativeHomology rh = relative_compose_homology(trivial_right(o), o, trivial_left(o), w);
  out.homology = rh.homology;
  out.per_arity = rh.per_arity;
  for (const auto& [n, h] : rh.per_arity)
    if (h.dims().size() > 1) {
      out.formal = false;
      out.unformal_arities.push_back(n);
    }
  if (out.formal && with_structure) {
    TreeBar tb(o, w.max_arity);
    out.cooperad = induced_cooperad(tb, w, o.name() + "!");
    out.has_structure = true;
  }
  return out;
}

Operad koszul_dual_operad(const Operad& o, const Window& w) {
  TreeBar tb(o, w.max_arity);
  return dual_operad(induced_cooperad(tb, w, o.name() + "!"));
}

DoubleDualReport double_dual_check(const Operad& o, const Window& w) {
  DoubleDualReport rep;
  Operad cs;
  try {
    cs = koszul_dual_operad(o, w);
  } catch (const AxiomError& e) {
    rep.formal = false;
    rep.note = e.what();
    return rep;
  }
  OperadReport check = check_operad(cs);
  rep.dual_operad_valid = check.valid;
  if (!check.valid && !check.failures.empty())
    rep.note = "dual operad fails " + check.failures[0].axiom + ": " + check.failures[0].detail;
  BarComplex bar(trivial_right(cs), cs, trivial_left(cs), w);
  bool ok = rep.dual_operad_valid;
  for (int n = 1; n <= w.max_arity; ++n) {
    ChainComplex dual = dualize(bar.complex(n));
    ArityHomology ah = homology_with_action(dual, n, [&](int d, int t) { return bar.action(n, -d, t).transpose(); });
    DualMatch dm;
    dm.arity = n;
    dm.expected = o.seq().arity(n).degree_dims();
    dm.computed = ah.component.degree_dims();
    dm.dims_match = dm.expected == dm.computed;
    SymSeqObject tmp(o.field(), w);
    if (ah.component.dim() > 0) tmp.set_arity(n, ah.component);
    dm.characters_match = dm.dims_match && same_characters(tmp, o.seq(), n);
    ok = ok && dm.dims_match && dm.characters_match;
    rep.arities.push_back(std::move(dm));
  }
  rep.ok = ok;
  return rep;
}

TowerReport truncation_tower(const Operad& o, const Window& w, int max_stage) {
  if (max_stage < 1 || max_stage > w.max_arity) throw ValidationError("truncation tower: stage count out of range");
  const Field& f = o.field();
  TowerReport rep;
  RelativeHomology kd = relative_compose_homology(trivial_right(o), o, trivial_left(o), w);
  std::unique_ptr<BarComplex> prev;
  for (int m = 1; m <= max_stage; ++m) {
    auto cur = std::make_unique<BarComplex>(truncated_right(o, m), o, trivial_left(o), w);
    TowerStage st;
    st.m = m;
    st.homology = SymSeqObject(f, w);
    SymSeqObject om(f, w);
    if (o.dim(m) > 0) om.set_arity(m, o.seq().arity(m));
    SymSeqObject predicted = compose(om, kd.homology, w);
    if (m >= 2 && o.dim(m) > 0) rep.norms.push_back({m, m, "O_" + std::to_string(m), norm_map(o.seq(), m).is_iso});

    for (int n = 1; n <= w.max_arity; ++n) {
      const BarArity& ba = cur->arity(n);
      const ChainComplex& cx = ba.complex;
      ArityHomology ah = homology_with_action(cx, n, [&](int d, int t) { return cur->action(n, d, t); });
      st.per_arity[n] = ah.homology;
      if (ah.component.dim() > 0) {
        if (n >= 2)
          rep.norms.push_back({m, n, "stage homology", norm_map(f, n, ah.component.dim(), ah.component.transpositions).is_iso});
        st.homology.set_arity(n, ah.component);
      }
      if (n >= 2) {
        for (const auto& [d, k] : ah.homology.dims()) {
          st.support[n].push_back(d);
          if (d != 1 - m) st.concentrated = false;
        }
      }

      // Fiber: cells whose first partition has m blocks.
      std::map<int, std::vector<std::size_t>> fiber_idx;
      std::map<int, std::vector<std::size_t>> pos_in_fiber;
      GradedSpace fs;
      for (const auto& [d, cs] : ba.cells) {
        pos_in_fiber[d].assign(cs.size(), static_cast<std::size_t>(-1));
        for (std::size_t k = 0; k < cs.size(); ++k) {
          const auto& p0 = cs[k].levels[0];
          int blocks = p0.empty() ? 0 : *std::max_element(p0.begin(), p0.end()) + 1;
          if (blocks != m) continue;
          pos_in_fiber[d][k] = fiber_idx[d].size();
          fiber_idx[d].push_back(k);
          fs.degrees[d].push_back(cx.space().degrees.at(d)[k]);
        }
      }
      ChainComplex fiber(f, fs);
      for (const auto& [d, idx] : fiber_idx) {
        if (!fiber_idx.count(d - 1)) continue;
        Matrix full = cx.d(d);
        std::vector<SparseVec> cols;
        for (std::size_t k : idx) {
          SparseVec col;
          for (const auto& [r, v] : full.column(k)) {
            std::size_t q = pos_in_fiber[d - 1][r];
            if (q == static_cast<std::size_t>(-1)) throw AxiomError("truncation tower: fiber is not a subcomplex");
            col.emplace_back(q, v);
          }
          cols.push_back(std::move(col));
        }
        fiber.set_d(d, Matrix::from_columns(f, fiber_idx.at(d - 1).size(), cols));
      }
      Homology fh = homology(fiber, true);
      st.fiber[n] = fh.dims();
      st.fiber_predicted[n] = predicted.arity(n).degree_dims();
      if (st.fiber[n] != st.fiber_predicted[n]) st.fiber_matches = false;

      if (m >= 2 && prev) {
        const BarArity& pa = prev->arity(n);
        const ChainComplex& px = pa.complex;
        Homology ph = homology(px, true);
        std::map<int, Matrix> inc, proj;
        std::set<int> degrees;
        for (const auto& [d, cs] : ba.cells) {
          degrees.insert(d);
          degrees.insert(d + 1);
          Matrix i_d(f, cs.size(), fiber.dim(d));
          for (std::size_t q = 0; q < fiber_idx[d].size(); ++q) i_d.set(fiber_idx[d][q], q, Scalar(1));
          inc[d] = std::move(i_d);
          std::map<BarCell, std::size_t> pidx;
          auto pit = pa.cells.find(d);
          if (pit != pa.cells.end())
            for (std::size_t k = 0; k < pit->second.size(); ++k) pidx.emplace(pit->second[k], k);
          Matrix p_d(f, px.dim(d), cs.size());
          for (std::size_t k = 0; k < cs.size(); ++k) {
            if (pos_in_fiber[d][k] != static_cast<std::size_t>(-1)) continue;
            auto it = pidx.find(cs[k]);
            if (it == pidx.end()) throw AxiomError("truncation tower: quotient cell missing from the previous stage");
            p_d.set(it->second, k, Scalar(1));
          }
          proj[d] = std::move(p_d);
        }
        for (const auto& [d, cs] : pa.cells) degrees.insert(d), degrees.insert(d + 1);
        auto rank_i = [&](int d) { return inc.count(d) ? induced_rank(find_degree(fh, d), inc.at(d), cx, d) : 0; };
        auto rank_p = [&](int d) { return proj.count(d) ? induced_rank(find_degree(ah.homology, d), proj.at(d), px, d) : 0; };
        for (int d : degrees) {
          std::size_t ri = rank_i(d), rp = rank_p(d), ri1 = rank_i(d - 1);
          bool a = hdim(ah.homology, d) == ri + rp;
          long delta1 = static_cast<long>(hdim(ph, d)) - static_cast<long>(rp);
          long delta2 = static_cast<long>(hdim(fh, d - 1)) - static_cast<long>(ri1);
          if (!a || delta1 != delta2 || delta1 < 0) st.les_consistent = false;
        }
      }
    }
    rep.stages.push_back(std::move(st));
    prev = std::move(cur);
  }
  return rep;
}

}  // namespace opkit
