#include <Eigen/Dense>
#include <cmath>

#include "rlie/exactalg.hpp"

namespace rlie {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct BatchedEchelon::Impl {
  Mat E;  // first `rank` rows: fully reduced echelon rows
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // pivot column of each row of E
  std::vector<std::int64_t> row_of_col;
  std::vector<Vec> pending;
};

BatchedEchelon::BatchedEchelon(const PrimeField& F, std::size_t width, std::size_t batch)
    : F_(F), width_(width), batch_(batch == 0 ? 1 : batch), impl_(std::make_unique<Impl>()) {
  const double bound = static_cast<double>(F.p() - 1) * (F.p() - 1) * static_cast<double>(width + 1);
  if (bound >= 9.0e15) throw ResourceError("batched elimination: accumulated sums would lose exactness");
  impl_->row_of_col.assign(width, -1);
}

BatchedEchelon::~BatchedEchelon() = default;
BatchedEchelon::BatchedEchelon(BatchedEchelon&&) noexcept = default;
BatchedEchelon& BatchedEchelon::operator=(BatchedEchelon&&) noexcept = default;

void BatchedEchelon::add(std::span<const Coeff> row) {
  if (row.size() != width_) throw DimensionError("batched elimination: row has wrong length");
  if (impl_->rank == width_) return;
  if (is_zero(row)) return;
  impl_->pending.emplace_back(row.begin(), row.end());
  if (impl_->pending.size() >= batch_) flush();
}

void BatchedEchelon::add(const SparseVec& row) {
  if (row.empty() || impl_->rank == width_) return;
  add(F_.to_dense(row, width_));
}

namespace {

void reduce_mod(Mat& M, double p) {
  M = M.unaryExpr([p](double x) {
    double r = std::fmod(x, p);
    return r < 0 ? r + p : r;
  });
}

}  // namespace

void BatchedEchelon::flush() {
  Impl& I = *impl_;
  if (I.pending.empty()) return;
  const std::size_t b = I.pending.size();
  const double p = F_.p();
  Mat C(b, width_);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < width_; ++j) C(i, j) = I.pending[i][j];
  I.pending.clear();
  if (I.rank > 0) {
    Mat G(b, I.rank);
    for (std::size_t k = 0; k < I.rank; ++k) G.col(k) = C.col(I.pivots[k]);
    C.noalias() -= G * I.E.topRows(I.rank);
    reduce_mod(C, p);
  }

  // eliminate within the batch
  std::vector<Vec> fresh;
  std::vector<std::size_t> fresh_piv;
  for (std::size_t i = 0; i < b; ++i) {
    Vec r(width_);
    for (std::size_t j = 0; j < width_; ++j) r[j] = static_cast<Coeff>(C(i, j));
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      const Coeff a = r[fresh_piv[k]];
      if (a) F_.axpy(r, F_.neg(a), fresh[k]);
    }
    std::size_t piv = 0;
    while (piv < width_ && r[piv] == 0) ++piv;
    if (piv == width_) continue;
    F_.scale(r, F_.inv(r[piv]));
    for (auto& q : fresh) {
      const Coeff a = q[piv];
      if (a) F_.axpy(q, F_.neg(a), r);
    }
    fresh.push_back(std::move(r));
    fresh_piv.push_back(piv);
    if (I.rank + fresh.size() == width_) break;
  }
  if (fresh.empty()) return;

  const std::size_t k = fresh.size();
  Mat N(k, width_);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < width_; ++j) N(i, j) = fresh[i][j];
  if (I.rank > 0) {
    Mat G(I.rank, k);
    for (std::size_t i = 0; i < k; ++i) G.col(i) = I.E.topRows(I.rank).col(fresh_piv[i]);
    Mat top = I.E.topRows(I.rank);
    top.noalias() -= G * N;
    reduce_mod(top, p);
    I.E.topRows(I.rank) = top;
  }
  if (static_cast<std::size_t>(I.E.rows()) < I.rank + k) {
    const std::size_t cap = std::min(width_, std::max<std::size_t>(2 * static_cast<std::size_t>(I.E.rows()), I.rank + k));
    Mat grown(cap, width_);
    if (I.rank) grown.topRows(I.rank) = I.E.topRows(I.rank);
    I.E.swap(grown);
  }
  I.E.middleRows(I.rank, k) = N;
  for (std::size_t i = 0; i < k; ++i) {
    I.row_of_col[fresh_piv[i]] = static_cast<std::int64_t>(I.rank + i);
    I.pivots.push_back(fresh_piv[i]);
  }
  I.rank += k;
}

std::size_t BatchedEchelon::rank() {
  flush();
  return impl_->rank;
}

SubspaceBasis BatchedEchelon::basis() {
  flush();
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < impl_->rank; ++i) {
    Vec r(width_);
    for (std::size_t j = 0; j < width_; ++j) r[j] = static_cast<Coeff>(impl_->E(i, j));
    rows.push_back(std::move(r));
  }
  return SubspaceBasis::span(F_, width_, rows);
}

SubspaceBasis BatchedEchelon::kernel() {
  flush();
  const Impl& I = *impl_;
  std::vector<Vec> vecs;
  for (std::size_t fcol = 0; fcol < width_; ++fcol) {
    if (I.row_of_col[fcol] >= 0) continue;
    Vec x(width_, 0);
    x[fcol] = 1;
    for (std::size_t k = 0; k < I.rank; ++k) x[I.pivots[k]] = F_.neg(static_cast<Coeff>(I.E(k, fcol)));
    vecs.push_back(std::move(x));
  }
  return SubspaceBasis::span(F_, width_, vecs);
}

}  // namespace rlie
