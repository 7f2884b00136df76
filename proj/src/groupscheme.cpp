#include "rlie/groupscheme.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "rlie/errors.hpp"

namespace rlie {
namespace {

class Acc {
 public:
  Acc(const PrimeField& F, std::size_t n) : F_(F), v_(n, 0), seen_(n, 0) {}
  void add(std::size_t i, Coeff c) {
    if (!seen_[i]) {
      seen_[i] = 1;
      idx_.push_back(i);
    }
    v_[i] += c;
  }
  void add(const SparseVec& x, Coeff c) {
    for (const Term& t : x) add(t.index, F_.mul(c, t.coeff));
  }
  SparseVec take() {
    std::sort(idx_.begin(), idx_.end());
    SparseVec out;
    for (std::size_t i : idx_) {
      if (const Coeff r = static_cast<Coeff>(v_[i] % F_.p())) out.push_back({static_cast<std::uint32_t>(i), r});
      v_[i] = 0;
      seen_[i] = 0;
    }
    idx_.clear();
    return out;
  }

 private:
  const PrimeField& F_;
  std::vector<std::uint64_t> v_;
  std::vector<char> seen_;
  std::vector<std::size_t> idx_;
};

using Tensor3 = std::vector<std::pair<std::uint64_t, Coeff>>;

Tensor3 normalize3(const PrimeField& F, Tensor3 t) {
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Tensor3 out;
  for (const auto& [k, c] : t) {
    if (!out.empty() && out.back().first == k)
      out.back().second = F.add(out.back().second, c);
    else
      out.emplace_back(k, c);
  }
  std::erase_if(out, [](const auto& e) { return e.second == 0; });
  return out;
}

std::string label_of(const HopfAlgebra& H, std::size_t a) {
  return a < H.labels.size() ? H.labels[a] : "e" + std::to_string(a);
}

std::vector<std::string> default_labels(std::size_t n, const std::string& stem) {
  std::vector<std::string> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = stem + std::to_string(i);
  return out;
}

void require_commutative(const HopfAlgebra& H, const char* op) {
  if (!H.commutative()) throw PreconditionError(std::string(op) + ": Hopf algebra is not commutative");
}

Vec frobenius(const HopfAlgebra& H, const Vec& x, unsigned n) {
  Vec y = x;
  for (unsigned i = 0; i < n; ++i) y = H.power(y, H.F.p());
  return y;
}

// smallest N with p^N >= dim, at least 1
unsigned stable_exponent(const HopfAlgebra& H) {
  unsigned N = 1;
  for (std::size_t q = H.F.p(); q < H.dim; q *= H.F.p()) ++N;
  return N;
}

// image of a high Frobenius power: the maximal separable subalgebra
SubspaceBasis separable_part(const HopfAlgebra& H) {
  const unsigned N = stable_exponent(H);
  std::vector<Vec> imgs;
  for (std::size_t a = 0; a < H.dim; ++a) imgs.push_back(frobenius(H, H.F.unit(H.dim, a), N));
  return SubspaceBasis::span(H.F, H.dim, imgs);
}

// primitive idempotents of a commutative algebra; they span {x : x^p = x}
std::vector<Vec> primitive_idempotents(const HopfAlgebra& H) {
  const PrimeField& F = H.F;
  const SubspaceBasis E = separable_part(H);
  const std::size_t r = E.dim();
  DenseMatrix M(H.dim, r);
  for (std::size_t s = 0; s < r; ++s) {
    const Vec w = F.sub(H.power(E.vectors()[s], F.p()), E.vectors()[s]);
    for (std::size_t k = 0; k < H.dim; ++k) M(k, s) = w[k];
  }
  std::vector<Vec> fixed;
  const SubspaceBasis K = nullspace(F, M);
  for (const Vec& c : K.vectors()) {
    Vec x(H.dim, 0);
    for (std::size_t s = 0; s < r; ++s) F.axpy(x, c[s], E.vectors()[s]);
    fixed.push_back(std::move(x));
  }
  std::vector<Vec> parts{H.unit};
  for (const Vec& b : fixed) {
    std::vector<Vec> next;
    for (const Vec& e : parts)
      for (Coeff lambda = 0; lambda < F.p(); ++lambda) {
        Vec shifted = b;
        F.axpy(shifted, F.neg(lambda), H.unit);
        // 1 - (b - lambda)^{p-1} picks the coordinates equal to lambda
        Vec ind = F.sub(H.unit, H.power(shifted, F.p() - 1));
        Vec f = H.multiply(e, ind);
        if (!is_zero(f)) next.push_back(std::move(f));
      }
    parts = std::move(next);
  }
  if (parts.size() != fixed.size()) throw Error("idempotent splitting did not match the separable rank");
  return parts;
}

// F_p-points of a commutative algebra as functionals on its basis
std::vector<Vec> rational_points(const HopfAlgebra& A) {
  const PrimeField& F = A.F;
  const SubspaceBasis E = separable_part(A);
  const unsigned N = stable_exponent(A);
  std::vector<Vec> out;
  for (const Vec& e : primitive_idempotents(A)) {
    std::vector<Vec> prods;
    for (const Vec& b : E.vectors()) prods.push_back(A.multiply(b, e));
    if (SubspaceBasis::span(F, A.dim, prods).dim() != 1) continue;
    std::size_t k = 0;
    while (e[k] == 0) ++k;
    Vec chi(A.dim);
    for (std::size_t i = 0; i < A.dim; ++i) {
      const Vec y = frobenius(A, A.multiply(F.unit(A.dim, i), e), N);
      chi[i] = F.div(y[k], e[k]);
    }
    out.push_back(std::move(chi));
  }
  return out;
}

}  // namespace

std::size_t FiniteGroupData::inverse(std::size_t a) const {
  for (std::size_t b = 0; b < order; ++b)
    if (mul(a, b) == identity) return b;
  throw InputError("group element " + std::to_string(a) + " has no inverse");
}

VerificationReport verify_group(const FiniteGroupData& G) {
  VerificationReport r;
  const std::size_t n = G.order;
  if (n == 0 || G.table.size() != n * n || G.identity >= n) {
    r.fail("table shape");
    return r;
  }
  for (std::size_t x : G.table)
    if (x >= n) {
      r.fail("table entry out of range");
      return r;
    }
  for (std::size_t a = 0; a < n; ++a)
    if (G.mul(G.identity, a) != a || G.mul(a, G.identity) != a) r.fail("identity fails at " + std::to_string(a));
  for (std::size_t a = 0; a < n; ++a) {
    bool found = false;
    for (std::size_t b = 0; b < n && !found; ++b) found = G.mul(a, b) == G.identity && G.mul(b, a) == G.identity;
    if (!found) r.fail("no inverse for " + std::to_string(a));
  }
  for (std::size_t a = 0; a < n && r.failures.size() < 10; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c))) {
          r.fail("associativity fails at (" + std::to_string(a) + ", " + std::to_string(b) + ", " +
                 std::to_string(c) + ")");
          b = c = n;
        }
  return r;
}

FiniteGroupData cyclic_group(std::size_t n) {
  if (n == 0) throw InputError("cyclic group of order 0");
  FiniteGroupData G{n, std::vector<std::size_t>(n * n), 0};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) G.table[a * n + b] = (a + b) % n;
  return G;
}

FiniteGroupData symmetric_group(std::size_t n) {
  if (n == 0 || n > 6) throw InputError("symmetric group: need 1 <= n <= 6");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> s(n);
  std::iota(s.begin(), s.end(), 0);
  do perms.push_back(s);
  while (std::next_permutation(s.begin(), s.end()));
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = i;
  const std::size_t N = perms.size();
  FiniteGroupData G{N, std::vector<std::size_t>(N * N), 0};
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      std::vector<std::size_t> c(n);
      for (std::size_t x = 0; x < n; ++x) c[x] = perms[a][perms[b][x]];
      G.table[a * N + b] = index.at(c);
    }
  return G;
}

FiniteGroupData direct_product(const FiniteGroupData& A, const FiniteGroupData& B) {
  const std::size_t n = A.order * B.order;
  FiniteGroupData G{n, std::vector<std::size_t>(n * n), A.identity * B.order + B.identity};
  for (std::size_t a1 = 0; a1 < A.order; ++a1)
    for (std::size_t b1 = 0; b1 < B.order; ++b1)
      for (std::size_t a2 = 0; a2 < A.order; ++a2)
        for (std::size_t b2 = 0; b2 < B.order; ++b2)
          G.table[(a1 * B.order + b1) * n + a2 * B.order + b2] = A.mul(a1, a2) * B.order + B.mul(b1, b2);
  return G;
}

std::optional<std::vector<std::size_t>> group_isomorphism(const FiniteGroupData& A, const FiniteGroupData& B) {
  if (A.order != B.order) return std::nullopt;
  const std::size_t n = A.order;
  auto elem_order = [](const FiniteGroupData& G, std::size_t g) {
    std::size_t k = 1;
    for (std::size_t x = g; x != G.identity; x = G.mul(x, g)) ++k;
    return k;
  };
  // greedy generating set of A
  std::vector<std::size_t> gens;
  std::vector<char> in(n, 0);
  in[A.identity] = 1;
  for (std::size_t g = 0; g < n; ++g) {
    if (in[g]) continue;
    gens.push_back(g);
    std::vector<std::size_t> sub;
    for (std::size_t x = 0; x < n; ++x)
      if (in[x]) sub.push_back(x);
    for (std::size_t i = 0; i < sub.size(); ++i)
      for (std::size_t h : gens) {
        const std::size_t y = A.mul(sub[i], h);
        if (!in[y]) {
          in[y] = 1;
          sub.push_back(y);
        }
      }
  }
  std::vector<std::size_t> images(gens.size());
  std::function<std::optional<std::vector<std::size_t>>(std::size_t)> search =
      [&](std::size_t depth) -> std::optional<std::vector<std::size_t>> {
    if (depth == gens.size()) {
      std::vector<std::size_t> phi(n, n);
      phi[A.identity] = B.identity;
      std::vector<std::size_t> queue{A.identity};
      for (std::size_t i = 0; i < queue.size(); ++i)
        for (std::size_t k = 0; k < gens.size(); ++k) {
          const std::size_t y = A.mul(queue[i], gens[k]);
          const std::size_t fy = B.mul(phi[queue[i]], images[k]);
          if (phi[y] == n) {
            phi[y] = fy;
            queue.push_back(y);
          } else if (phi[y] != fy) {
            return std::nullopt;
          }
        }
      std::vector<char> hit(n, 0);
      for (std::size_t x = 0; x < n; ++x) {
        if (phi[x] == n || hit[phi[x]]) return std::nullopt;
        hit[phi[x]] = 1;
      }
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (phi[A.mul(x, y)] != B.mul(phi[x], phi[y])) return std::nullopt;
      return phi;
    }
    const std::size_t want = elem_order(A, gens[depth]);
    for (std::size_t b = 0; b < n; ++b) {
      if (elem_order(B, b) != want) continue;
      images[depth] = b;
      if (auto r = search(depth + 1)) return r;
    }
    return std::nullopt;
  };
  return search(0);
}

HopfAlgebra::HopfAlgebra(PrimeField F_, std::size_t dim_)
    : F(std::move(F_)),
      dim(dim_),
      labels(default_labels(dim_, "e")),
      mult(dim_ * dim_),
      unit(dim_, 0),
      comult(dim_),
      counit(dim_, 0),
      antipode(dim_) {}

Vec HopfAlgebra::multiply(const Vec& x, const Vec& y) const {
  Acc acc(F, dim);
  for (std::size_t a = 0; a < dim; ++a) {
    if (!x[a]) continue;
    for (std::size_t b = 0; b < dim; ++b)
      if (y[b]) acc.add(mult[a * dim + b], F.mul(x[a], y[b]));
  }
  return F.to_dense(acc.take(), dim);
}

Vec HopfAlgebra::power(const Vec& x, std::uint64_t e) const {
  Vec result = unit, base = x;
  while (e) {
    if (e & 1) result = multiply(result, base);
    e >>= 1;
    if (e) base = multiply(base, base);
  }
  return result;
}

bool HopfAlgebra::commutative() const {
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = a + 1; b < dim; ++b)
      if (mult[a * dim + b] != mult[b * dim + a]) return false;
  return true;
}

bool HopfAlgebra::cocommutative() const {
  for (const SparseVec& d : comult) {
    std::vector<Term> swapped;
    for (const Term& t : d)
      swapped.push_back({static_cast<std::uint32_t>((t.index % dim) * dim + t.index / dim), t.coeff});
    if (F.normalize(std::move(swapped)) != d) return false;
  }
  return true;
}

HopfReport verify_hopf(const HopfAlgebra& H) {
  HopfReport r;
  const PrimeField& F = H.F;
  const std::size_t D = H.dim;
  if (D == 0 || H.mult.size() != D * D || H.unit.size() != D || H.comult.size() != D || H.counit.size() != D ||
      H.antipode.size() != D) {
    r.fail("structure tensors have inconsistent sizes");
    return r;
  }
  for (const auto* t : {&H.mult, &H.comult, &H.antipode})
    for (const SparseVec& v : *t)
      for (const Term& x : v)
        if (x.index >= (t == &H.comult ? D * D : D) || x.coeff >= F.p() || x.coeff == 0) {
          r.fail("structure tensor entry out of range");
          return r;
        }
  auto name = [&](std::size_t a) { return label_of(H, a); };
  auto pair = [&](std::size_t a, std::size_t b) { return "(" + name(a) + ", " + name(b) + ")"; };
  constexpr std::size_t cap = 8;
  const SparseVec u = F.to_sparse(H.unit);
  Acc acc(F, D), acc2(F, D * D);

  for (std::size_t a = 0; a < D; ++a) {
    for (const Term& t : u) acc.add(H.mult[t.index * D + a], t.coeff);
    const SparseVec left = acc.take();
    for (const Term& t : u) acc.add(H.mult[a * D + t.index], t.coeff);
    const SparseVec right = acc.take();
    const SparseVec ea{{static_cast<std::uint32_t>(a), 1}};
    if (left != ea || right != ea) r.fail("unit law fails at " + name(a));
  }

  std::size_t bad = 0;
  for (std::size_t a = 0; a < D && bad < cap; ++a)
    for (std::size_t b = 0; b < D && bad < cap; ++b) {
      const SparseVec& ab = H.mult[a * D + b];
      for (std::size_t c = 0; c < D; ++c) {
        for (const Term& t : ab) acc.add(H.mult[t.index * D + c], t.coeff);
        const SparseVec left = acc.take();
        for (const Term& t : H.mult[b * D + c]) acc.add(H.mult[a * D + t.index], t.coeff);
        if (acc.take() != left) {
          r.fail("associativity fails at (" + name(a) + ", " + name(b) + ", " + name(c) + ")");
          if (++bad >= cap) break;
        }
      }
    }

  for (std::size_t a = 0; a < D; ++a) {
    Tensor3 left, right;
    for (const Term& t : H.comult[a]) {
      const std::size_t i = t.index / D, j = t.index % D;
      for (const Term& s : H.comult[i])
        left.emplace_back(static_cast<std::uint64_t>(s.index) * D + j, F.mul(t.coeff, s.coeff));
      for (const Term& s : H.comult[j])
        right.emplace_back(static_cast<std::uint64_t>(i) * D * D + s.index, F.mul(t.coeff, s.coeff));
    }
    if (normalize3(F, std::move(left)) != normalize3(F, std::move(right))) {
      r.fail("coassociativity fails at " + name(a));
      if (r.failures.size() > 2 * cap) break;
    }
  }

  for (std::size_t a = 0; a < D; ++a) {
    Acc l(F, D), rr(F, D);
    for (const Term& t : H.comult[a]) {
      const std::size_t i = t.index / D, j = t.index % D;
      if (H.counit[i]) l.add(j, F.mul(H.counit[i], t.coeff));
      if (H.counit[j]) rr.add(i, F.mul(H.counit[j], t.coeff));
    }
    const SparseVec ea{{static_cast<std::uint32_t>(a), 1}};
    if (l.take() != ea || rr.take() != ea) r.fail("counit law fails at " + name(a));
  }

  {
    for (const Term& s : u)
      for (const Term& t : u) acc2.add(s.index * D + t.index, F.mul(s.coeff, t.coeff));
    SparseVec uu = acc2.take();
    for (const Term& t : u) acc2.add(H.comult[t.index], t.coeff);
    if (acc2.take() != uu) r.fail("comultiplication does not preserve the unit");
    if (H.epsilon(H.unit) != 1) r.fail("counit does not preserve the unit");
  }

  bad = 0;
  for (std::size_t a = 0; a < D && bad < cap; ++a)
    for (std::size_t b = 0; b < D; ++b) {
      const SparseVec& ab = H.mult[a * D + b];
      Coeff eab = 0;
      for (const Term& t : ab) eab = F.add(eab, F.mul(t.coeff, H.counit[t.index]));
      if (eab != F.mul(H.counit[a], H.counit[b])) {
        r.fail("counit is not multiplicative at " + pair(a, b));
        if (++bad >= cap) break;
      }
      for (const Term& t : ab) acc2.add(H.comult[t.index], t.coeff);
      const SparseVec lhs = acc2.take();
      for (const Term& x : H.comult[a]) {
        const std::size_t i = x.index / D, j = x.index % D;
        for (const Term& y : H.comult[b]) {
          const Coeff c = F.mul(x.coeff, y.coeff);
          const SparseVec& m1 = H.mult[i * D + y.index / D];
          const SparseVec& m2 = H.mult[j * D + y.index % D];
          for (const Term& s : m1) {
            const Coeff cs = F.mul(c, s.coeff);
            for (const Term& t : m2) acc2.add(s.index * D + t.index, F.mul(cs, t.coeff));
          }
        }
      }
      if (acc2.take() != lhs) {
        r.fail("comultiplication is not multiplicative at " + pair(a, b));
        if (++bad >= cap) break;
      }
    }

  for (std::size_t a = 0; a < D; ++a) {
    Acc l(F, D), rr(F, D);
    for (const Term& t : H.comult[a]) {
      const std::size_t i = t.index / D, j = t.index % D;
      for (const Term& s : H.antipode[i]) l.add(H.mult[s.index * D + j], F.mul(t.coeff, s.coeff));
      for (const Term& s : H.antipode[j]) rr.add(H.mult[i * D + s.index], F.mul(t.coeff, s.coeff));
    }
    Vec want = H.unit;
    F.scale(want, H.counit[a]);
    const SparseVec w = F.to_sparse(want);
    if (l.take() != w || rr.take() != w) r.fail("antipode law fails at " + name(a));
  }

  r.commutative = H.commutative();
  r.cocommutative = H.cocommutative();
  return r;
}

HopfAlgebra constant_hopf(const FiniteGroupData& G, std::uint32_t p) {
  const VerificationReport g = verify_group(G);
  if (!g.ok) throw InputError("not a group: " + g.failures.front());
  const std::size_t n = G.order;
  HopfAlgebra H(PrimeField(p), n);
  H.labels = default_labels(n, "d");
  for (std::size_t a = 0; a < n; ++a) {
    H.mult[a * n + a] = {{static_cast<std::uint32_t>(a), 1}};
    H.unit[a] = 1;
    std::vector<Term> d;
    for (std::size_t s = 0; s < n; ++s)
      d.push_back({static_cast<std::uint32_t>(s * n + G.mul(G.inverse(s), a)), 1});
    H.comult[a] = H.F.normalize(std::move(d));
    H.antipode[a] = {{static_cast<std::uint32_t>(G.inverse(a)), 1}};
  }
  H.counit[G.identity] = 1;
  return H;
}

HopfAlgebra group_algebra(const FiniteGroupData& G, std::uint32_t p) {
  const VerificationReport g = verify_group(G);
  if (!g.ok) throw InputError("not a group: " + g.failures.front());
  const std::size_t n = G.order;
  HopfAlgebra H(PrimeField(p), n);
  H.labels = default_labels(n, "g");
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) H.mult[a * n + b] = {{static_cast<std::uint32_t>(G.mul(a, b)), 1}};
    H.comult[a] = {{static_cast<std::uint32_t>(a * n + a), 1}};
    H.counit[a] = 1;
    H.antipode[a] = {{static_cast<std::uint32_t>(G.inverse(a)), 1}};
  }
  H.unit[G.identity] = 1;
  return H;
}

HopfAlgebra truncated_polynomial(std::uint32_t p, unsigned h) {
  std::size_t N = 1;
  for (unsigned i = 0; i < h; ++i) {
    N *= p;
    if (N > 4096) throw ResourceError("truncated polynomial algebra larger than 4096");
  }
  HopfAlgebra H(PrimeField(p), N);
  const PrimeField& F = H.F;
  for (std::size_t a = 0; a < N; ++a) {
    H.labels[a] = a == 0 ? "1" : a == 1 ? "x" : "x^" + std::to_string(a);
    for (std::size_t b = 0; a + b < N; ++b) H.mult[a * N + b] = {{static_cast<std::uint32_t>(a + b), 1}};
    std::vector<Term> d;
    for (std::size_t i = 0; i <= a; ++i)
      if (const Coeff c = binomial_mod(a, i, p)) d.push_back({static_cast<std::uint32_t>(i * N + a - i), c});
    H.comult[a] = F.normalize(std::move(d));
    H.antipode[a] = {{static_cast<std::uint32_t>(a), a % 2 ? F.neg(1) : Coeff{1}}};
  }
  H.unit[0] = 1;
  H.counit[0] = 1;
  return H;
}

HopfAlgebra tensor_hopf(const HopfAlgebra& A, const HopfAlgebra& B) {
  if (!(A.F == B.F)) throw InputError("tensor product of Hopf algebras over different fields");
  const std::size_t DA = A.dim, DB = B.dim, D = DA * DB;
  HopfAlgebra H(A.F, D);
  const PrimeField& F = H.F;
  auto idx = [&](std::size_t a, std::size_t b) { return static_cast<std::uint32_t>(a * DB + b); };
  for (std::size_t a = 0; a < DA; ++a)
    for (std::size_t b = 0; b < DB; ++b) {
      const std::size_t x = idx(a, b);
      H.labels[x] = label_of(A, a) + "." + label_of(B, b);
      H.unit[x] = F.mul(A.unit[a], B.unit[b]);
      H.counit[x] = F.mul(A.counit[a], B.counit[b]);
      std::vector<Term> s;
      for (const Term& t : A.antipode[a])
        for (const Term& q : B.antipode[b]) s.push_back({idx(t.index, q.index), F.mul(t.coeff, q.coeff)});
      H.antipode[x] = F.normalize(std::move(s));
      std::vector<Term> d;
      for (const Term& t : A.comult[a])
        for (const Term& q : B.comult[b])
          d.push_back({static_cast<std::uint32_t>(idx(t.index / DA, q.index / DB) * D + idx(t.index % DA, q.index % DB)),
                       F.mul(t.coeff, q.coeff)});
      H.comult[x] = F.normalize(std::move(d));
      for (std::size_t c = 0; c < DA; ++c)
        for (std::size_t e = 0; e < DB; ++e) {
          std::vector<Term> m;
          for (const Term& t : A.mult[a * DA + c])
            for (const Term& q : B.mult[b * DB + e]) m.push_back({idx(t.index, q.index), F.mul(t.coeff, q.coeff)});
          H.mult[x * D + idx(c, e)] = F.normalize(std::move(m));
        }
    }
  return H;
}

namespace {

class PbwStraightening {
 public:
  PbwStraightening(const RestrictedLieAlgebra& R, std::size_t D)
      : R_(R), F_(R.lie.field()), n_(R.lie.dim()), p_(F_.p()), D_(D), acc_(F_, D), gm_(n_ * D), done_(n_ * D, 0) {
    pw_.resize(n_ + 1, 1);
    for (std::size_t i = 1; i <= n_; ++i) pw_[i] = pw_[i - 1] * p_;
  }

  std::size_t digit(std::size_t m, std::size_t i) const { return (m / pw_[i]) % p_; }
  std::size_t lowest(std::size_t m) const {
    std::size_t j = 0;
    while (digit(m, j) == 0) ++j;
    return j;
  }

  // x_i times the PBW monomial m
  const SparseVec& gen_mul(std::size_t i, std::size_t m) {
    const std::size_t key = i * D_ + m;
    if (done_[key]) return gm_[key];
    SparseVec out;
    if (m == 0) {
      out = {{static_cast<std::uint32_t>(pw_[i]), 1}};
    } else {
      const std::size_t j = lowest(m);
      if (i < j || (i == j && digit(m, i) + 1 < p_)) {
        out = {{static_cast<std::uint32_t>(m + pw_[i]), 1}};
      } else if (i == j) {
        const std::size_t rest = m - (p_ - 1) * pw_[i];
        std::vector<std::pair<SparseVec, Coeff>> parts;
        for (std::size_t k = 0; k < n_; ++k)
          if (R_.pmap[i][k]) parts.emplace_back(gen_mul(k, rest), R_.pmap[i][k]);
        out = combine(parts);
      } else {
        const std::size_t rest = m - pw_[j];
        const SparseVec t = gen_mul(i, rest);
        std::vector<std::pair<SparseVec, Coeff>> parts;
        for (const Term& q : t) parts.emplace_back(gen_mul(j, q.index), q.coeff);
        for (const Term& b : R_.lie.bracket(i, j)) parts.emplace_back(gen_mul(b.index, rest), b.coeff);
        out = combine(parts);
      }
    }
    done_[key] = 1;
    gm_[key] = std::move(out);
    return gm_[key];
  }

  SparseVec left_gen(std::size_t j, const SparseVec& v) {
    std::vector<std::pair<SparseVec, Coeff>> parts;
    for (const Term& q : v) parts.emplace_back(gen_mul(j, q.index), q.coeff);
    return combine(parts);
  }

  std::string label(std::size_t m) const {
    if (m == 0) return "1";
    std::string s;
    for (std::size_t i = 0; i < n_; ++i)
      if (const std::size_t a = digit(m, i)) {
        if (!s.empty()) s += ' ';
        s += R_.lie.labels()[i];
        if (a > 1) s += "^" + std::to_string(a);
      }
    return s;
  }

  const std::vector<std::size_t>& powers() const { return pw_; }

 private:
  SparseVec combine(const std::vector<std::pair<SparseVec, Coeff>>& parts) {
    for (const auto& [v, c] : parts) acc_.add(v, c);
    return acc_.take();
  }

  const RestrictedLieAlgebra& R_;
  const PrimeField& F_;
  std::size_t n_;
  std::uint32_t p_;
  std::size_t D_;
  Acc acc_;
  std::vector<std::size_t> pw_;
  std::vector<SparseVec> gm_;
  std::vector<char> done_;
};

}  // namespace

HopfAlgebra restricted_enveloping(const RestrictedLieAlgebra& R, const EnvelopeOptions& opts) {
  const std::size_t n = R.lie.dim();
  const std::uint32_t p = R.lie.p();
  if (R.pmap.size() != n) throw DimensionError("p-map has " + std::to_string(R.pmap.size()) + " images, expected " +
                                               std::to_string(n));
  for (const Vec& v : R.pmap)
    if (v.size() != n) throw DimensionError("p-map image of wrong length");
  std::size_t D = 1;
  for (std::size_t i = 0; i < n; ++i) {
    D *= p;
    if (D > opts.budget) throw ResourceError("restricted enveloping algebra exceeds the budget of " +
                                             std::to_string(opts.budget));
  }
  if (D * D > opts.max_table) throw ResourceError("multiplication table of u(L) exceeds " +
                                                  std::to_string(opts.max_table) + " entries");
  HopfAlgebra H(R.lie.field(), D);
  const PrimeField& F = H.F;
  PbwStraightening U(R, D);
  const auto& pw = U.powers();
  for (std::size_t m = 0; m < D; ++m) H.labels[m] = U.label(m);
  for (std::size_t b = 0; b < D; ++b) H.mult[b] = {{static_cast<std::uint32_t>(b), 1}};
  for (std::size_t a = 1; a < D; ++a) {
    const std::size_t j = U.lowest(a);
    for (std::size_t b = 0; b < D; ++b) H.mult[a * D + b] = U.left_gen(j, H.mult[(a - pw[j]) * D + b]);
  }
  H.unit[0] = 1;
  H.counit[0] = 1;
  H.antipode[0] = {{0, 1}};
  Acc acc(F, D);
  for (std::size_t a = 1; a < D; ++a) {
    const std::size_t j = U.lowest(a);
    for (const Term& q : H.antipode[a - pw[j]]) acc.add(H.mult[q.index * D + pw[j]], F.neg(q.coeff));
    H.antipode[a] = acc.take();
  }
  for (std::size_t a = 0; a < D; ++a) {
    std::vector<Term> d;
    for (std::size_t b = 0; b < D; ++b) {
      Coeff c = 1;
      for (std::size_t i = 0; i < n && c; ++i) c = F.mul(c, binomial_mod(U.digit(a, i), U.digit(b, i), p));
      if (c) d.push_back({static_cast<std::uint32_t>(b * D + (a - b)), c});
    }
    H.comult[a] = F.normalize(std::move(d));
  }
  return H;
}

HopfAlgebra dual_hopf(const HopfAlgebra& H) {
  const std::size_t D = H.dim;
  HopfAlgebra K(H.F, D);
  const PrimeField& F = H.F;
  for (std::size_t a = 0; a < D; ++a) K.labels[a] = label_of(H, a) + "^*";
  std::vector<std::vector<Term>> m(D * D), d(D), s(D);
  for (std::size_t k = 0; k < D; ++k)
    for (const Term& t : H.comult[k]) m[t.index].push_back({static_cast<std::uint32_t>(k), t.coeff});
  for (std::size_t ab = 0; ab < D * D; ++ab)
    for (const Term& t : H.mult[ab]) d[t.index].push_back({static_cast<std::uint32_t>(ab), t.coeff});
  for (std::size_t k = 0; k < D; ++k)
    for (const Term& t : H.antipode[k]) s[t.index].push_back({static_cast<std::uint32_t>(k), t.coeff});
  for (std::size_t i = 0; i < D * D; ++i) K.mult[i] = F.normalize(std::move(m[i]));
  for (std::size_t i = 0; i < D; ++i) {
    K.comult[i] = F.normalize(std::move(d[i]));
    K.antipode[i] = F.normalize(std::move(s[i]));
  }
  K.unit = H.counit;
  K.counit = H.unit;
  return K;
}

SubspaceBasis primitive_elements(const HopfAlgebra& H) {
  const std::size_t D = H.dim;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Coeff>> entries;
  for (std::size_t a = 0; a < D; ++a) {
    for (const Term& t : H.comult[a]) entries.push_back({{t.index, a}, t.coeff});
    for (std::size_t k = 0; k < D; ++k)
      if (const Coeff u = H.unit[k]) {
        entries.push_back({{a * D + k, a}, H.F.neg(u)});
        entries.push_back({{k * D + a, a}, H.F.neg(u)});
      }
  }
  return nullspace(H.F, SparseMatrix(H.F, D * D, D, std::move(entries)));
}

RestrictedLieAlgebra primitives(const HopfAlgebra& H) {
  if (!H.cocommutative()) throw PreconditionError("primitives: Hopf algebra is not cocommutative");
  const PrimeField& F = H.F;
  const SubspaceBasis P = primitive_elements(H);
  const std::size_t r = P.dim();
  const auto& v = P.vectors();
  auto coords = [&](const Vec& w) {
    if (!P.contains(F, w)) throw Error("primitives are not closed");
    return P.coordinates(F, w);
  };
  std::vector<std::string> labels(r);
  for (std::size_t s = 0; s < r; ++s) {
    const bool unit_vec = std::count_if(v[s].begin(), v[s].end(), [](Coeff c) { return c != 0; }) == 1;
    labels[s] = unit_vec ? label_of(H, P.pivots()[s]) : "P" + std::to_string(s);
  }
  BracketTable table;
  for (std::size_t s = 0; s < r; ++s)
    for (std::size_t t = s + 1; t < r; ++t) {
      const Vec c = coords(F.sub(H.multiply(v[s], v[t]), H.multiply(v[t], v[s])));
      if (!is_zero(c)) table[{s, t}] = F.to_sparse(c);
    }
  RestrictedLieAlgebra out{LieAlgebra(F, labels, table), {}};
  for (std::size_t s = 0; s < r; ++s) out.pmap.push_back(coords(H.power(v[s], F.p())));
  return out;
}

GroupLikes group_likes(const HopfAlgebra& H) {
  if (!H.cocommutative()) throw PreconditionError("group_likes: Hopf algebra is not cocommutative");
  GroupLikes out;
  out.elements = rational_points(dual_hopf(H));
  std::sort(out.elements.begin(), out.elements.end());
  std::map<Vec, std::size_t> index;
  for (std::size_t i = 0; i < out.elements.size(); ++i) index[out.elements[i]] = i;
  const std::size_t n = out.elements.size();
  out.group.order = n;
  out.group.table.resize(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto it = index.find(H.multiply(out.elements[a], out.elements[b]));
      if (it == index.end()) throw Error("group-like elements are not closed under multiplication");
      out.group.table[a * n + b] = it->second;
    }
  auto it = index.find(H.unit);
  if (it == index.end()) throw Error("unit is not among the group-like elements");
  out.group.identity = it->second;
  return out;
}

HopfAlgebra hopf_quotient(const HopfAlgebra& H, const std::vector<Vec>& ideal) {
  const PrimeField& F = H.F;
  const std::size_t D = H.dim;
  const SubspaceBasis J = SubspaceBasis::span(F, D, ideal);
  std::vector<char> piv(D, 0);
  for (std::size_t k : J.pivots()) piv[k] = 1;
  std::vector<std::size_t> keep, pos(D, D);
  for (std::size_t k = 0; k < D; ++k)
    if (!piv[k]) {
      pos[k] = keep.size();
      keep.push_back(k);
    }
  const std::size_t d = keep.size();
  auto red = [&](const Vec& v) {
    const Vec w = J.reduce(F, v);
    Vec out(d);
    for (std::size_t s = 0; s < d; ++s) out[s] = w[keep[s]];
    return out;
  };
  std::vector<SparseVec> basis_red(D);
  for (std::size_t k = 0; k < D; ++k) basis_red[k] = F.to_sparse(red(F.unit(D, k)));
  auto red_sparse = [&](const SparseVec& v) {
    Vec w(d, 0);
    for (const Term& t : v) F.axpy(w, t.coeff, basis_red[t.index]);
    return F.to_sparse(w);
  };
  HopfAlgebra Q(F, d);
  for (std::size_t s = 0; s < d; ++s) {
    Q.labels[s] = label_of(H, keep[s]);
    Q.counit[s] = H.counit[keep[s]];
    Q.antipode[s] = red_sparse(H.antipode[keep[s]]);
    for (std::size_t t = 0; t < d; ++t) Q.mult[s * d + t] = red_sparse(H.mult[keep[s] * D + keep[t]]);
    std::vector<Term> c;
    for (const Term& x : H.comult[keep[s]])
      for (const Term& a : basis_red[x.index / D])
        for (const Term& b : basis_red[x.index % D])
          c.push_back({static_cast<std::uint32_t>(a.index * d + b.index), F.mul(x.coeff, F.mul(a.coeff, b.coeff))});
    Q.comult[s] = F.normalize(std::move(c));
  }
  Q.unit = red(H.unit);
  return Q;
}

HopfAlgebra sub_hopf(const HopfAlgebra& H, const std::vector<Vec>& span) {
  const PrimeField& F = H.F;
  const std::size_t D = H.dim;
  const SubspaceBasis S = SubspaceBasis::span(F, D, span);
  const std::size_t r = S.dim();
  const auto& b = S.vectors();
  const auto& piv = S.pivots();
  auto coords = [&](const Vec& w) {
    if (!S.contains(F, w)) throw Error("subspace is not a sub-Hopf algebra");
    return S.coordinates(F, w);
  };
  auto apply = [&](const std::vector<SparseVec>& T, const Vec& x) {
    Vec out(D, 0);
    for (std::size_t a = 0; a < D; ++a)
      if (x[a]) F.axpy(out, x[a], T[a]);
    return out;
  };
  HopfAlgebra K(F, r);
  for (std::size_t s = 0; s < r; ++s) {
    const bool unit_vec = std::count_if(b[s].begin(), b[s].end(), [](Coeff c) { return c != 0; }) == 1;
    K.labels[s] = unit_vec ? label_of(H, piv[s]) : "b" + std::to_string(s);
    K.counit[s] = H.epsilon(b[s]);
    K.antipode[s] = F.to_sparse(coords(apply(H.antipode, b[s])));
    for (std::size_t t = 0; t < r; ++t) K.mult[s * r + t] = F.to_sparse(coords(H.multiply(b[s], b[t])));
    Vec M(D * D, 0);
    for (std::size_t a = 0; a < D; ++a)
      if (b[s][a]) F.axpy(M, b[s][a], H.comult[a]);
    Vec rebuilt(D * D, 0);
    std::vector<Term> c;
    for (std::size_t u = 0; u < r; ++u)
      for (std::size_t v = 0; v < r; ++v)
        if (const Coeff x = M[piv[u] * D + piv[v]]) {
          c.push_back({static_cast<std::uint32_t>(u * r + v), x});
          for (std::size_t i = 0; i < D; ++i)
            if (b[u][i])
              for (std::size_t j = 0; j < D; ++j)
                if (b[v][j]) rebuilt[i * D + j] = F.add(rebuilt[i * D + j], F.mul(x, F.mul(b[u][i], b[v][j])));
        }
    if (rebuilt != M) throw Error("subspace is not a subcoalgebra");
    K.comult[s] = F.normalize(std::move(c));
  }
  K.unit = coords(H.unit);
  return K;
}

HopfAlgebra frobenius_kernel(const HopfAlgebra& H, unsigned n) {
  require_commutative(H, "frobenius_kernel");
  const PrimeField& F = H.F;
  std::vector<Vec> gens;
  for (std::size_t a = 0; a < H.dim; ++a) {
    Vec x = F.unit(H.dim, a);
    F.axpy(x, F.neg(H.counit[a]), H.unit);
    if (Vec y = frobenius(H, x, n); !is_zero(y)) gens.push_back(std::move(y));
  }
  std::vector<Vec> ideal;
  for (const Vec& y : gens)
    for (std::size_t a = 0; a < H.dim; ++a) ideal.push_back(H.multiply(F.unit(H.dim, a), y));
  return hopf_quotient(H, ideal);
}

std::optional<unsigned> height(const HopfAlgebra& H) {
  require_commutative(H, "height");
  const PrimeField& F = H.F;
  std::vector<Vec> xs;
  for (std::size_t a = 0; a < H.dim; ++a) {
    Vec x = F.unit(H.dim, a);
    F.axpy(x, F.neg(H.counit[a]), H.unit);
    xs.push_back(std::move(x));
  }
  std::size_t q = 1;
  for (unsigned n = 0;; ++n) {
    if (std::all_of(xs.begin(), xs.end(), [](const Vec& x) { return is_zero(x); })) return n;
    if (q >= H.dim) return std::nullopt;
    for (Vec& x : xs) x = H.power(x, F.p());
    q *= F.p();
  }
}

ConnectedEtale split_connected_etale(const HopfAlgebra& H) {
  require_commutative(H, "split_connected_etale");
  const PrimeField& F = H.F;
  const std::vector<Vec> idem = primitive_idempotents(H);
  const Vec* e0 = nullptr;
  for (const Vec& e : idem)
    if (H.epsilon(e) == 1) e0 = &e;
  if (!e0) throw Error("no primitive idempotent at the augmentation");
  const Vec rest = F.sub(H.unit, *e0);
  std::vector<Vec> ideal;
  for (std::size_t a = 0; a < H.dim; ++a) ideal.push_back(H.multiply(rest, F.unit(H.dim, a)));
  return {hopf_quotient(H, ideal), sub_hopf(H, separable_part(H).vectors()), idem.size()};
}

}  // namespace rlie
