#include "rlie/cohomology.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>
#include <sstream>

#include "cohomology_detail.hpp"
#include "rlie/errors.hpp"

namespace rlie {

namespace detail {

WeightContext::WeightContext(const LieAlgebra& L_, Grading G_)
    : L(L_), F(L_.field()), n(L_.dim()), p(L_.p()), G(std::move(G_)) {
  cls.resize(n);
  local.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Weight w = G.normalize(G.weights[i]);
    auto [it, fresh] = class_of.emplace(w, class_weight.size());
    if (fresh) {
      class_weight.push_back(w);
      members.emplace_back();
    }
    cls[i] = it->second;
    local[i] = members[it->second].size();
    members[it->second].push_back(i);
  }
}

std::size_t WeightContext::find(const Weight& w) const {
  auto it = class_of.find(w);
  return it == class_of.end() ? npos : it->second;
}

}  // namespace detail

using detail::WeightContext;

namespace {

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// rows of a matrix under construction, merged at the end
struct RowBuilder {
  const PrimeField& F;
  std::size_t cols;
  std::vector<std::vector<Term>> rows;
  RowBuilder(const PrimeField& F_, std::size_t r, std::size_t c) : F(F_), cols(c), rows(r) {}
  void add(std::size_t r, std::size_t c, Coeff v) {
    if (v) rows[r].push_back({static_cast<std::uint32_t>(c), v});
  }
  SparseMatrix finish() {
    std::vector<SparseVec> out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out[r] = F.normalize(std::move(rows[r]));
    return SparseMatrix(cols, std::move(out));
  }
};

struct Split {
  std::vector<std::size_t> rows, cols;
  SparseMatrix matrix;
};

// Splits M by column weight ids. Every row must touch a single weight.
std::map<std::size_t, Split> split_by_weight(const SparseMatrix& M, const std::vector<std::size_t>& colw,
                                             const char* what) {
  std::map<std::size_t, Split> out;
  std::map<std::size_t, std::vector<SparseVec>> rows;
  for (std::size_t c = 0; c < M.cols(); ++c) out[colw[c]].cols.push_back(c);
  std::vector<std::size_t> pos(M.cols());
  for (auto& [w, s] : out)
    for (std::size_t j = 0; j < s.cols.size(); ++j) pos[s.cols[j]] = j;
  for (std::size_t r = 0; r < M.rows(); ++r) {
    const SparseVec& row = M.row(r);
    if (row.empty()) continue;
    const std::size_t w = colw[row.front().index];
    SparseVec loc;
    for (const Term& t : row) {
      if (colw[t.index] != w) throw PreconditionError(std::string(what) + " does not preserve weights");
      loc.push_back({static_cast<std::uint32_t>(pos[t.index]), t.coeff});
    }
    out[w].rows.push_back(r);
    rows[w].push_back(std::move(loc));
  }
  for (auto& [w, s] : out) s.matrix = SparseMatrix(s.cols.size(), std::move(rows[w]));
  return out;
}

// Interns weights as small integers.
struct WeightIds {
  std::map<Weight, std::size_t> ids;
  std::vector<Weight> list;
  std::size_t operator()(const Weight& w) {
    auto [it, fresh] = ids.emplace(w, list.size());
    if (fresh) list.push_back(w);
    return it->second;
  }
};


void check_field(const LieAlgebra& L) {
  if (L.p() <= 3) throw InputError("cohomology requires p > 3 (got p = " + std::to_string(L.p()) + ")");
}

std::string weight_string(const Weight& w) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  os << ')';
  return os.str();
}

// Elements h of the weight-zero part whose ad acts on every weight class by
// a scalar; one row of class eigenvalues per basis element of that space.
std::vector<std::vector<Coeff>> inner_torus(const WeightContext& X) {
  const PrimeField& F = X.F;
  const std::size_t n = X.n;
  const std::size_t zc = X.find(X.G.zero());
  if (zc == WeightContext::npos || X.G.rank() == 0) return {};
  const auto& L0 = X.members[zc];
  const std::size_t u = L0.size();
  // equations in the coefficients of h over L0
  std::vector<SparseVec> eqs;
  for (std::size_t j = 0; j < n; ++j) {
    std::map<std::size_t, std::vector<Term>> off;  // coordinate k != j
    for (std::size_t b = 0; b < u; ++b)
      for (const Term& t : X.L.bracket(L0[b], j))
        if (t.index != j) off[t.index].push_back({static_cast<std::uint32_t>(b), t.coeff});
    for (auto& [k, terms] : off) eqs.push_back(F.normalize(std::move(terms)));
  }
  auto diag = [&](std::size_t j) {
    Vec d(u, 0);
    for (std::size_t b = 0; b < u; ++b)
      for (const Term& t : X.L.bracket(L0[b], j))
        if (t.index == j) d[b] = t.coeff;
    return d;
  };
  std::vector<Vec> first(X.members.size());
  for (std::size_t c = 0; c < X.members.size(); ++c) {
    first[c] = diag(X.members[c][0]);
    for (std::size_t t = 1; t < X.members[c].size(); ++t)
      eqs.push_back(F.to_sparse(F.sub(diag(X.members[c][t]), first[c])));
  }
  const SubspaceBasis H = nullspace(F, SparseMatrix(u, std::move(eqs)));
  std::vector<std::vector<Coeff>> out;
  for (const Vec& h : H.vectors()) {
    std::vector<Coeff> lam(X.members.size());
    bool nonzero = false;
    for (std::size_t c = 0; c < X.members.size(); ++c) {
      lam[c] = F.dot(first[c], h);
      nonzero = nonzero || lam[c] != 0;
    }
    if (nonzero) out.push_back(std::move(lam));
  }
  return out;
}

struct BlockInfo {
  std::size_t c1 = 0, c2 = 0;
  std::set<std::vector<Coeff>> eig;  // distinct eigenvalue rows of the cochains
  bool mixed = false;
};

CohomologyReport run(const LieAlgebra& L, const std::vector<Vec>* pmap_dense, const CohomologyOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  const std::uint32_t p = L.p();
  const bool restricted = pmap_dense != nullptr;

  CohomologyReport rep;
  rep.dim = n;
  rep.restricted = restricted;
  rep.method = opts.method == CohomologyMethod::full ? "full" : "parametrized";

  Grading G = Grading::trivial(n);
  bool graded = false;
  if (opts.use_grading && L.grading()) {
    G = *L.grading();
    if (auto v = grading_violation(L, G)) throw PreconditionError("grading is not compatible with the bracket: " + *v);
    graded = G.rank() > 0;
  }
  rep.provenance["grading"] = graded ? "rank " + std::to_string(G.rank()) + " modulus " + std::to_string(G.modulus)
                                     : "none";
  WeightContext X(L, G);

  std::vector<SparseVec> pmap;
  if (restricted) {
    for (std::size_t i = 0; i < n; ++i) {
      pmap.push_back(F.to_sparse((*pmap_dense)[i]));
      const Weight want = G.scale(X.w(i), p);
      for (const Term& t : pmap.back())
        if (X.w(t.index) != want)
          throw PreconditionError("p-map is not homogeneous: image of " + L.labels()[i] + " has a term " +
                                  L.labels()[t.index] + " of the wrong weight");
    }
  }

  // blocks and their torus eigenvalues
  const auto torus = opts.skip_inner_torus ? inner_torus(X) : std::vector<std::vector<Coeff>>{};
  std::map<Weight, BlockInfo> blocks;
  const std::size_t nc = X.members.size();
  auto note = [&](const Weight& c, std::size_t count, bool second, const std::vector<Coeff>* eig) {
    BlockInfo& b = blocks[c];
    (second ? b.c2 : b.c1) += count;
    if (b.mixed) return;
    b.eig.insert(*eig);
    if (b.eig.size() > 16) b.mixed = true;
  };
  std::vector<Coeff> eig(torus.size());
  for (std::size_t A = 0; A < nc; ++A)
    for (std::size_t K = 0; K < nc; ++K) {
      for (std::size_t t = 0; t < torus.size(); ++t) eig[t] = F.sub(torus[t][K], torus[t][A]);
      note(G.sub(X.class_weight[K], X.class_weight[A]), X.members[A].size() * X.members[K].size(), false, &eig);
    }
  for (std::size_t A = 0; A < nc; ++A)
    for (std::size_t B = A; B < nc; ++B) {
      const std::size_t pairs = A == B ? X.members[A].size() * (X.members[A].size() - 1) / 2
                                       : X.members[A].size() * X.members[B].size();
      if (pairs == 0) continue;
      const Weight wab = G.add(X.class_weight[A], X.class_weight[B]);
      for (std::size_t K = 0; K < nc; ++K) {
        for (std::size_t t = 0; t < torus.size(); ++t)
          eig[t] = F.sub(torus[t][K], F.add(torus[t][A], torus[t][B]));
        note(G.sub(X.class_weight[K], wab), pairs * X.members[K].size(), true, &eig);
      }
    }
  // some toral h acts on every cochain of the block by the same nonzero scalar
  auto skippable = [&](const BlockInfo& b) {
    if (b.mixed || b.eig.empty()) return false;
    DenseMatrix M(b.eig.size(), torus.size());
    std::size_t r = 0;
    for (const auto& v : b.eig) {
      for (std::size_t t = 0; t < torus.size(); ++t) M(r, t) = v[t];
      ++r;
    }
    Vec x;
    return solve(F, M, Vec(b.eig.size(), 1), x);
  };
  auto wanted = [&](const Weight& c) {
    if (opts.only_weights.empty()) return true;
    for (const Weight& w : opts.only_weights)
      if (G.normalize(w) == c) return true;
    return false;
  };

  // center dimension per weight class
  auto center_dim = [&](const Weight& c) -> std::size_t {
    const std::size_t k = X.find(c);
    if (k == WeightContext::npos) return 0;
    const auto& mem = X.members[k];
    std::vector<SparseVec> rows(mem.size());
    for (std::size_t t = 0; t < mem.size(); ++t) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < n; ++j)
        for (const Term& b : L.bracket(mem[t], j)) terms.push_back({static_cast<std::uint32_t>(j * n + b.index), b.coeff});
      rows[t] = F.normalize(std::move(terms));
    }
    return mem.size() - rank(F, SparseMatrix(n * n, std::move(rows)));
  };
  if (restricted)
    for (std::size_t A = 0; A < nc; ++A)
      if (center_dim(X.class_weight[A]) > 0) throw PreconditionError("restricted_h2 requires a centerless algebra");

  std::vector<std::size_t> S;
  if (opts.method == CohomologyMethod::parametrized) {
    S = generating_set(L);
    rep.generating_set = S;
  }

  for (const auto& [c, info] : blocks) {
    if (!wanted(c)) continue;
    if (torus.size() && skippable(info)) {
      BlockStat st;
      st.weight = c;
      st.skipped = true;
      rep.blocks.push_back(std::move(st));
      continue;
    }
    detail::BlockInput in{&X, restricted ? &pmap : nullptr, &S, center_dim(c), c, opts.generators};
    detail::BlockOutput o = opts.method == CohomologyMethod::parametrized ? detail::solve_block_parametrized(in)
                                                                           : detail::solve_block_full(in);
    BlockStat st = o.stat;
    for (auto& g : o.generators) rep.generators.push_back(std::move(g));
    rep.h1 += st.h1;
    rep.h2 += st.h2;
    rep.h2_restricted += st.h2_restricted;
    rep.blocks.push_back(std::move(st));
  }
  rep.provenance["method"] = rep.method;
  rep.provenance["blocks"] = std::to_string(rep.blocks.size());
  std::size_t skipped = 0;
  for (const auto& b : rep.blocks) skipped += b.skipped;
  rep.provenance["skipped_blocks"] = std::to_string(skipped);
  if (!opts.only_weights.empty()) {
    std::string ws;
    for (const auto& w : opts.only_weights) ws += weight_string(w);
    rep.provenance["only_weights"] = ws;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace

std::size_t cochain_dim(std::size_t n, int q) {
  if (q < 0) throw InputError("cochain degree must be nonnegative");
  return choose(n, static_cast<std::uint64_t>(q)) * n;
}

std::size_t cochain_index(std::size_t n, const std::vector<std::size_t>& tuple, std::size_t k) {
  const std::size_t q = tuple.size();
  std::size_t rank = 0;
  std::size_t prev = static_cast<std::size_t>(-1);
  for (std::size_t i = 0; i < q; ++i) {
    if (tuple[i] >= n || (i > 0 && tuple[i] <= tuple[i - 1]))
      throw InputError("cochain tuple must be strictly increasing and in range");
    for (std::size_t j = prev + 1; j < tuple[i]; ++j) rank += choose(n - 1 - j, q - 1 - i);
    prev = tuple[i];
  }
  if (k >= n) throw InputError("cochain target index out of range");
  return rank * n + k;
}

SparseMatrix ce_differential(const LieAlgebra& L, int q) {
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  if (q < 0 || q > 2) throw InputError("ce_differential: degree must be 0, 1 or 2");
  const std::size_t cols = cochain_dim(n, q), rows = cochain_dim(n, q + 1);
  RowBuilder B(F, rows, cols);
  auto c2 = [&](std::size_t a, std::size_t b, std::size_t k, Coeff v) -> std::pair<std::size_t, Coeff> {
    if (a < b) return {cochain_index(n, {a, b}, k), v};
    return {cochain_index(n, {b, a}, k), F.neg(v)};
  };
  if (q == 0) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t m = 0; m < n; ++m)
        for (const Term& t : L.bracket(a, m)) B.add(a * n + t.index, m, t.coeff);
  } else if (q == 1) {
    // d1(g)(x, y) = [x, g y] - [y, g x] - g[x, y]
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y) {
        const std::size_t r0 = cochain_index(n, {x, y}, 0);
        for (std::size_t m = 0; m < n; ++m) {
          for (const Term& t : L.bracket(x, m)) B.add(r0 + t.index, y * n + m, t.coeff);
          for (const Term& t : L.bracket(y, m)) B.add(r0 + t.index, x * n + m, F.neg(t.coeff));
        }
        for (const Term& t : L.bracket(x, y))
          for (std::size_t k = 0; k < n; ++k) B.add(r0 + k, t.index * n + k, F.neg(t.coeff));
      }
  } else {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        for (std::size_t z = y + 1; z < n; ++z) {
          const std::size_t r0 = cochain_index(n, {x, y, z}, 0);
          // [x, f(y,z)] - [y, f(x,z)] + [z, f(x,y)]
          const std::size_t fyz = cochain_index(n, {y, z}, 0), fxz = cochain_index(n, {x, z}, 0),
                            fxy = cochain_index(n, {x, y}, 0);
          for (std::size_t m = 0; m < n; ++m) {
            for (const Term& t : L.bracket(x, m)) B.add(r0 + t.index, fyz + m, t.coeff);
            for (const Term& t : L.bracket(y, m)) B.add(r0 + t.index, fxz + m, F.neg(t.coeff));
            for (const Term& t : L.bracket(z, m)) B.add(r0 + t.index, fxy + m, t.coeff);
          }
          // - f([x,y], z) + f([x,z], y) - f([y,z], x)
          auto term = [&](std::size_t u, std::size_t v, std::size_t w, Coeff sign) {
            for (const Term& t : L.bracket(u, v)) {
              if (t.index == w) continue;
              for (std::size_t k = 0; k < n; ++k) {
                auto [col, c] = c2(t.index, w, k, F.mul(sign, t.coeff));
                B.add(r0 + k, col, c);
              }
            }
          };
          term(x, y, z, F.neg(1));
          term(x, z, y, 1);
          term(y, z, x, F.neg(1));
        }
  }
  return B.finish();
}

Weight cochain_weight(const Grading& G, const std::vector<std::size_t>& tuple, std::size_t k) {
  if (k >= G.weights.size()) throw InputError("cochain_weight: index out of range");
  Weight w = G.weights[k];
  for (std::size_t a : tuple) {
    if (a >= G.weights.size()) throw InputError("cochain_weight: index out of range");
    w = G.sub(w, G.weights[a]);
  }
  return G.normalize(w);
}

std::vector<CochainBlock> weight_blocks(const LieAlgebra& L, const Grading& G, int q) {
  if (G.weights.size() != L.dim()) throw DimensionError("grading has the wrong number of weights");
  if (auto v = grading_violation(L, G)) throw PreconditionError("grading is not compatible with the bracket: " + *v);
  const std::size_t n = L.dim();
  const SparseMatrix D = ce_differential(L, q);
  WeightIds ids;
  std::vector<std::size_t> colw(D.cols());
  std::vector<std::size_t> tuple(static_cast<std::size_t>(q));
  // enumerate q-subsets in lexicographic order
  std::size_t idx = 0;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == tuple.size()) {
      for (std::size_t k = 0; k < n; ++k) colw[idx * n + k] = ids(cochain_weight(G, tuple, k));
      ++idx;
      return;
    }
    for (std::size_t a = start; a < n; ++a) {
      tuple[pos] = a;
      rec(pos + 1, a + 1);
    }
  };
  rec(0, 0);
  auto parts = split_by_weight(D, colw, "the differential");
  std::vector<CochainBlock> out;
  for (auto& [w, s] : parts)
    out.push_back(CochainBlock{ids.list[w], std::move(s.cols), std::move(s.rows), std::move(s.matrix)});
  return out;
}

std::size_t cohomology_dim(const LieAlgebra& L, int q, const std::optional<Grading>& G) {
  check_field(L);
  if (q != 1 && q != 2) throw InputError("cohomology_dim: degree must be 1 or 2");
  const Grading g = G ? *G : Grading::trivial(L.dim());
  const PrimeField& F = L.field();
  std::map<Weight, std::size_t> cols, rank_in, rank_out;
  for (auto& b : weight_blocks(L, g, q - 1)) rank_in[b.weight] = rank(F, b.matrix);
  for (auto& b : weight_blocks(L, g, q)) {
    cols[b.weight] = b.domain.size();
    rank_out[b.weight] = rank(F, b.matrix);
  }
  std::size_t h = 0;
  for (const auto& [w, c] : cols) h += c - rank_out[w] - rank_in[w];
  return h;
}

VerificationReport verify_deformation(const RestrictedLieAlgebra& R, const RestrictedDeformation& d) {
  VerificationReport rep;
  const LieAlgebra& L = R.lie;
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  const std::uint32_t p = L.p();
  std::vector<SparseVec> f(n * n);
  for (const auto& [key, v] : d.f) {
    const auto [a, b] = key;
    if (a >= b || b >= n) {
      rep.fail("deformation bracket key out of range or not increasing");
      return rep;
    }
    f[a * n + b] = v;
    SparseVec neg = v;
    for (auto& t : neg) t.coeff = F.neg(t.coeff);
    f[b * n + a] = std::move(neg);
  }
  // sparse accumulator
  std::vector<std::uint64_t> acc(n, 0);
  std::vector<std::uint32_t> touched;
  auto put = [&](std::uint32_t k, std::uint64_t v) {
    if (acc[k] == 0) touched.push_back(k);
    acc[k] = (acc[k] + v) % p;
    if (acc[k] == 0) acc[k] = p;  // keep the slot marked as touched
  };
  auto take = [&]() {
    SparseVec out;
    std::sort(touched.begin(), touched.end());
    for (auto k : touched) {
      const Coeff c = static_cast<Coeff>(acc[k] % p);
      if (c) out.push_back({k, c});
      acc[k] = 0;
    }
    touched.clear();
    return out;
  };
  // Jacobi, first order in t: sum over cyclic (u, v, w) of f([u,v],w) + [f(u,v),w]
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (std::size_t z = y + 1; z < n; ++z) {
        const std::size_t cyc[3][3] = {{x, y, z}, {y, z, x}, {z, x, y}};
        for (const auto& c : cyc) {
          for (const Term& t : L.bracket(c[0], c[1]))
            for (const Term& s : f[t.index * n + c[2]]) put(s.index, static_cast<std::uint64_t>(t.coeff) * s.coeff);
          for (const Term& t : f[c[0] * n + c[1]])
            for (const Term& s : L.bracket(t.index, c[2])) put(s.index, static_cast<std::uint64_t>(t.coeff) * s.coeff);
        }
        if (!take().empty()) {
          rep.fail("Jacobi fails to first order on (" + L.labels()[x] + ", " + L.labels()[y] + ", " + L.labels()[z] +
                   ")");
          if (rep.failures.size() >= 8) return rep;
        }
      }
  if (d.omega.empty()) return rep;
  if (d.omega.size() != n) {
    rep.fail("deformation p-map has the wrong number of images");
    return rep;
  }
  auto fx = [&](std::size_t x, const SparseVec& a) {
    for (const Term& t : a)
      for (const Term& s : f[x * n + t.index]) put(s.index, static_cast<std::uint64_t>(t.coeff) * s.coeff);
  };
  auto adx = [&](std::size_t x, const SparseVec& a) {
    for (const Term& t : a)
      for (const Term& s : L.bracket(x, t.index)) put(s.index, static_cast<std::uint64_t>(t.coeff) * s.coeff);
  };
  // ad(x^[p]) = (ad x)^p, first order in t, on basis pairs
  for (std::size_t x = 0; x < n; ++x) {
    const SparseVec rho = F.to_sparse(R.pmap[x]);
    for (std::size_t y = 0; y < n; ++y) {
      SparseVec a{{static_cast<std::uint32_t>(y), 1}}, b;
      for (std::uint32_t k = 0; k < p; ++k) {
        adx(x, b);
        fx(x, a);
        b = take();
        adx(x, a);
        a = take();
      }
      // want = f(x^[p], y) + [omega(x), y]
      for (const Term& t : rho)
        for (const Term& s : f[t.index * n + y]) put(s.index, static_cast<std::uint64_t>(t.coeff) * s.coeff);
      for (const Term& t : d.omega[x])
        for (const Term& s : L.bracket(t.index, y)) put(s.index, static_cast<std::uint64_t>(t.coeff) * s.coeff);
      if (take() != b) {
        rep.fail("restricted condition fails to first order for (" + L.labels()[x] + ", " + L.labels()[y] + ")");
        if (rep.failures.size() >= 8) return rep;
      }
    }
  }
  return rep;
}

CohomologyReport lie_cohomology(const LieAlgebra& L, const CohomologyOptions& opts) { return run(L, nullptr, opts); }

CohomologyReport restricted_h2(const RestrictedLieAlgebra& R, const CohomologyOptions& opts) {
  if (R.lie.p() < 5) throw InputError("restricted cohomology requires p >= 5 (got p = " + std::to_string(R.lie.p()) + ")");
  if (R.pmap.size() != R.lie.dim()) throw DimensionError("p-map has the wrong number of images");
  return run(R.lie, &R.pmap, opts);
}

ConsistencyReport consistency_check(const RestrictedLieAlgebra& R, const CohomologyReport& rep) {
  ConsistencyReport out;
  auto check = [&](bool ok, const std::string& what) {
    out.checks.push_back(what);
    if (!ok) {
      out.ok = false;
      out.failures.push_back(what);
    }
  };
  check(rep.h2_restricted <= rep.h2, "h2* <= h2");
  check(rep.h2 <= rep.h2_restricted + rep.dim * rep.h1, "h2 <= h2* + dim * h1");
  bool inj = true;
  for (const auto& b : rep.blocks)
    if (!b.skipped && !b.injective) inj = false;
  check(inj, "H2* -> H2 injective on every solved block");
  bool gens = true;
  for (const auto& g : rep.generators)
    if (!verify_deformation(R, g).ok) gens = false;
  check(gens, "generators re-verify over dual numbers");
  if (rep.restricted && rep.method == "parametrized" && !rep.generators.empty())
    check(rep.generators.size() == rep.h2_restricted, "one generator per restricted class");
  return out;
}

}  // namespace rlie
