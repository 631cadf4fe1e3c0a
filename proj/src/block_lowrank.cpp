#include "rentropy/block_lowrank.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

#include "rentropy/exact_oracle.hpp"
#include "rentropy/kernel_gram.hpp"
#include "rentropy/kernels.hpp"
#include "rentropy/rng.hpp"

namespace rentropy {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be positive and finite");
  }
  if (std::abs(alpha - 1.0) < kAlphaOneGuard) {
    throw std::invalid_argument("alpha too close to 1 for the Renyi order");
  }
}

ColMat thin_q(const ColMat& m) {
  const Index cols = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<ColMat> qr(m);
  return qr.householderQ() * ColMat::Identity(m.rows(), cols);
}

}  // namespace

Partition kmeans_partition(const SampleSet& data, int c, std::uint64_t seed, int max_iters) {
  validate_samples(data);
  const Index n = data.n();
  const Index d = data.d();
  if (c < 1) throw std::invalid_argument("cluster count must be positive");
  if (c > n) throw std::invalid_argument("more clusters than samples");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");

  auto rng = stream_rng(seed, kStreamKmeans);
  RowMat centroids(c, d);

  // k-means++ seeding: next center drawn with probability proportional to
  // the squared distance from the nearest chosen center
  {
    std::uniform_int_distribution<Index> first(0, n - 1);
    centroids.row(0) = data.x.row(first(rng));
    Vec dist2 = Vec::Constant(n, std::numeric_limits<double>::infinity());
    for (int s = 1; s < c; ++s) {
      for (Index i = 0; i < n; ++i) {
        const double d2 = (data.x.row(i) - centroids.row(s - 1)).squaredNorm();
        if (d2 < dist2(i)) dist2(i) = d2;
      }
      const double total = dist2.sum();
      Index pick = 0;
      if (total > 0.0) {
        std::uniform_real_distribution<double> u(0.0, total);
        double target = u(rng);
        for (Index i = 0; i < n; ++i) {
          target -= dist2(i);
          if (target <= 0.0) {
            pick = i;
            break;
          }
          pick = i;
        }
      }
      centroids.row(s) = data.x.row(pick);
    }
  }

  Partition part;
  part.c = c;
  part.assignments.assign(static_cast<std::size_t>(n), 0);
  part.sizes.assign(static_cast<std::size_t>(c), 0);

  std::vector<int> prev;
  double prev_obj = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iters; ++iter) {
    prev = part.assignments;
    // assignment step, ties to the lowest cluster index
    std::fill(part.sizes.begin(), part.sizes.end(), Index{0});
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d2 = (data.x.row(i) - centroids.row(0)).squaredNorm();
      for (int s = 1; s < c; ++s) {
        const double d2 = (data.x.row(i) - centroids.row(s)).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = s;
        }
      }
      part.assignments[static_cast<std::size_t>(i)] = best;
      ++part.sizes[static_cast<std::size_t>(best)];
    }
    // emptied clusters take the farthest member of the largest cluster
    for (int e = 0; e < c; ++e) {
      if (part.sizes[static_cast<std::size_t>(e)] > 0) continue;
      int big = 0;
      for (int s = 1; s < c; ++s) {
        if (part.sizes[static_cast<std::size_t>(s)] > part.sizes[static_cast<std::size_t>(big)]) big = s;
      }
      Index far = -1;
      double far_d2 = -1.0;
      for (Index i = 0; i < n; ++i) {
        if (part.assignments[static_cast<std::size_t>(i)] != big) continue;
        const double d2 = (data.x.row(i) - centroids.row(big)).squaredNorm();
        if (d2 > far_d2) {
          far_d2 = d2;
          far = i;
        }
      }
      part.assignments[static_cast<std::size_t>(far)] = e;
      --part.sizes[static_cast<std::size_t>(big)];
      ++part.sizes[static_cast<std::size_t>(e)];
      centroids.row(e) = data.x.row(far);
    }
    // update step
    centroids.setZero();
    for (Index i = 0; i < n; ++i) {
      centroids.row(part.assignments[static_cast<std::size_t>(i)]) += data.x.row(i);
    }
    for (int s = 0; s < c; ++s) {
      centroids.row(s) /= static_cast<double>(part.sizes[static_cast<std::size_t>(s)]);
    }
    double sse = 0.0;
    for (Index i = 0; i < n; ++i) {
      sse += (data.x.row(i) - centroids.row(part.assignments[static_cast<std::size_t>(i)])).squaredNorm();
    }
    // pairwise within-cluster objective sum_s (1/|V_s|) sum_{i,j} |x_i-x_j|^2
    // equals twice the sum of squared distances to the centroids
    const double obj = 2.0 * sse;
    part.objective_trace.push_back(obj);
    part.objective = obj;
    if (part.assignments == prev) break;
    if (std::isfinite(prev_obj) && prev_obj - obj <= 1e-6 * std::abs(prev_obj)) break;
    prev_obj = obj;
  }

  part.centroids = centroids;
  part.radii = Vec::Zero(c);
  for (Index i = 0; i < n; ++i) {
    const int s = part.assignments[static_cast<std::size_t>(i)];
    const double d2 = (data.x.row(i) - centroids.row(s)).squaredNorm();
    if (d2 > part.radii(s) * part.radii(s)) part.radii(s) = std::sqrt(d2);
  }
  return part;
}

SvdFactors randomized_svd(const RowMat& block, int k, int oversample, std::uint64_t seed) {
  const Index nr = block.rows();
  const Index nc = block.cols();
  const Index kmax = std::min(nr, nc);
  if (k < 1 || k > kmax) throw std::invalid_argument("svd rank must be in [1, min(rows, cols)]");
  if (oversample < 0) throw std::invalid_argument("oversample must be non-negative");
  const Index l = std::min<Index>(static_cast<Index>(k) + oversample, kmax);

  auto rng = stream_rng(seed, kStreamRsvd);
  std::normal_distribution<double> normal(0.0, 1.0);
  ColMat omega(nc, l);
  for (Index c = 0; c < l; ++c) {
    for (Index i = 0; i < nc; ++i) omega(i, c) = normal(rng);
  }

  ColMat q = thin_q(block * omega);
  // one power iteration, re-orthonormalized to avoid collapsing directions
  q = thin_q(block.transpose() * q);
  q = thin_q(block * q);

  const ColMat small = q.transpose() * block;  // l by nc
  Eigen::JacobiSVD<ColMat> svd(small, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SvdFactors f;
  f.u = q * svd.matrixU().leftCols(k);
  f.sigma = svd.singularValues().head(k);
  f.v = svd.matrixV().leftCols(k);
  return f;
}

BlockLowRank build_block_lowrank(const SampleSet& data, const KernelSpec& spec, int c, int k,
                                 std::uint64_t seed) {
  validate_kernel(spec);
  if (!spec.shift_invariant()) {
    throw std::invalid_argument("block low-rank approximation requires a shift-invariant kernel");
  }
  validate_samples(data);
  const Index n = data.n();
  const Index d = data.d();
  if (k < 1) throw std::invalid_argument("rank must be positive");

  BlockLowRank blr;
  blr.n_ = n;
  blr.d_ = d;
  blr.rank_ = k;
  blr.kernel_ = spec;
  blr.partition_ = kmeans_partition(data, c, seed);
  const Partition& part = blr.partition_;

  blr.offsets_.assign(static_cast<std::size_t>(c) + 1, 0);
  for (int s = 0; s < c; ++s) {
    blr.offsets_[static_cast<std::size_t>(s) + 1] =
        blr.offsets_[static_cast<std::size_t>(s)] + part.sizes[static_cast<std::size_t>(s)];
  }
  blr.perm_.reserve(static_cast<std::size_t>(n));
  for (int s = 0; s < c; ++s) {
    for (Index i = 0; i < n; ++i) {
      if (part.assignments[static_cast<std::size_t>(i)] == s) blr.perm_.push_back(i);
    }
  }

  // shift-invariant normalization: k(x,x) = 1 for every sample
  const double inv_n = 1.0 / static_cast<double>(n);
  auto entry = [&](Index pi, Index pj) {
    const double kv = kernel_value(spec, data.x.data() + pi * d, data.x.data() + pj * d, d);
    return gram_entry(kv, n, 1.0, 1.0);
  };

  blr.diag_.resize(static_cast<std::size_t>(c));
  for (int s = 0; s < c; ++s) {
    const Index off = blr.offsets_[static_cast<std::size_t>(s)];
    const Index m = part.sizes[static_cast<std::size_t>(s)];
    RowMat& block = blr.diag_[static_cast<std::size_t>(s)];
    block.resize(m, m);
    for (Index i = 0; i < m; ++i) {
      block(i, i) = inv_n;
      for (Index j = i + 1; j < m; ++j) {
        const double v = entry(blr.perm_[static_cast<std::size_t>(off + i)],
                               blr.perm_[static_cast<std::size_t>(off + j)]);
        block(i, j) = v;
        block(j, i) = v;
      }
    }
  }

  blr.off_.resize(static_cast<std::size_t>(c));
  for (int s = 0; s < c; ++s) {
    for (int t = s + 1; t < c; ++t) {
      const Index offs = blr.offsets_[static_cast<std::size_t>(s)];
      const Index offt = blr.offsets_[static_cast<std::size_t>(t)];
      const Index ms = part.sizes[static_cast<std::size_t>(s)];
      const Index mt = part.sizes[static_cast<std::size_t>(t)];
      RowMat block(ms, mt);
      for (Index i = 0; i < ms; ++i) {
        for (Index j = 0; j < mt; ++j) {
          block(i, j) = entry(blr.perm_[static_cast<std::size_t>(offs + i)],
                              blr.perm_[static_cast<std::size_t>(offt + j)]);
        }
      }
      const int ke = static_cast<int>(std::min<Index>(k, std::min(ms, mt)));
      const std::uint64_t block_seed =
          mix64(seed) ^ mix64((static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint64_t>(t));
      blr.off_[static_cast<std::size_t>(s)].push_back(randomized_svd(block, ke, 10, block_seed));
    }
  }
  return blr;
}

void BlockLowRank::apply_block(const ColMat& x, ColMat& y) const {
  if (x.rows() != n_) throw std::invalid_argument("input length does not match operator order");
  const Index cols = x.cols();
  const int c = partition_.c;

  ColMat w(n_, cols);
  for (Index p = 0; p < n_; ++p) w.row(p) = x.row(perm_[static_cast<std::size_t>(p)]);

  ColMat out(n_, cols);
  // each destination block accumulates its sources in ascending order, so the
  // result is independent of how the outer loop is scheduled
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < c; ++s) {
    const Index offs = offsets_[static_cast<std::size_t>(s)];
    const Index ms = offsets_[static_cast<std::size_t>(s) + 1] - offs;
    ColMat acc = ColMat::Zero(ms, cols);
    for (int t = 0; t < c; ++t) {
      const Index offt = offsets_[static_cast<std::size_t>(t)];
      const Index mt = offsets_[static_cast<std::size_t>(t) + 1] - offt;
      const auto wt = w.middleRows(offt, mt);
      if (t == s) {
        acc.noalias() += diag_[static_cast<std::size_t>(s)] * wt;
      } else if (t > s) {
        const SvdFactors& f = off_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t - s - 1)];
        ColMat proj = f.v.transpose() * wt;
        proj = f.sigma.asDiagonal() * proj;
        acc.noalias() += f.u * proj;
      } else {
        const SvdFactors& f = off_[static_cast<std::size_t>(t)][static_cast<std::size_t>(s - t - 1)];
        ColMat proj = f.u.transpose() * wt;
        proj = f.sigma.asDiagonal() * proj;
        acc.noalias() += f.v * proj;
      }
    }
    out.middleRows(offs, ms) = acc;
  }

  y.resize(n_, cols);
  for (Index p = 0; p < n_; ++p) y.row(perm_[static_cast<std::size_t>(p)]) = out.row(p);
}

void BlockLowRank::apply(const Vec& x, Vec& y) const {
  ColMat xm = x;
  ColMat ym;
  apply_block(xm, ym);
  y = ym.col(0);
}

RowMat BlockLowRank::to_dense() const {
  const int c = partition_.c;
  RowMat packed = RowMat::Zero(n_, n_);
  for (int s = 0; s < c; ++s) {
    const Index offs = offsets_[static_cast<std::size_t>(s)];
    const Index ms = offsets_[static_cast<std::size_t>(s) + 1] - offs;
    packed.block(offs, offs, ms, ms) = diag_[static_cast<std::size_t>(s)];
    for (int t = s + 1; t < c; ++t) {
      const Index offt = offsets_[static_cast<std::size_t>(t)];
      const Index mt = offsets_[static_cast<std::size_t>(t) + 1] - offt;
      const SvdFactors& f = off_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t - s - 1)];
      const ColMat rec = f.u * f.sigma.asDiagonal() * f.v.transpose();
      packed.block(offs, offt, ms, mt) = rec;
      packed.block(offt, offs, mt, ms) = rec.transpose();
    }
  }
  RowMat dense(n_, n_);
  for (Index p = 0; p < n_; ++p) {
    for (Index q = 0; q < n_; ++q) {
      dense(perm_[static_cast<std::size_t>(p)], perm_[static_cast<std::size_t>(q)]) = packed(p, q);
    }
  }
  return dense;
}

bool BlockLowRank::spot_check_psd(int probes, std::uint64_t seed) {
  if (probes < 1) throw std::invalid_argument("probe count must be positive");
  auto rng = stream_rng(seed, kStreamPsdCheck);
  std::normal_distribution<double> normal(0.0, 1.0);
  bool ok = true;
  Vec v(n_), gv(n_);
  for (int p = 0; p < probes && ok; ++p) {
    for (Index i = 0; i < n_; ++i) v(i) = normal(rng);
    apply(v, gv);
    if (v.dot(gv) < kPsdTol * v.squaredNorm()) ok = false;
  }
  psd_checked_ = true;
  psd_ok_ = ok;
  return ok;
}

Vec blr_matvec(const BlockLowRank& blr, const Vec& v) {
  Vec y;
  blr.apply(v, y);
  return y;
}

int default_cluster_count(Index n) {
  if (n < 1) throw std::invalid_argument("empty sample set");
  return std::max(1, static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 0.25))));
}

int default_rank(Index n) {
  if (n < 1) throw std::invalid_argument("empty sample set");
  return std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
}

double gaussian_lipschitz(const KernelSpec& spec, Index n) {
  if (!spec.shift_invariant()) {
    throw std::invalid_argument("Lipschitz constant derivation covers shift-invariant kernels");
  }
  return 1.0 / (spec.sigma * std::exp(0.5) * static_cast<double>(n));
}

double partition_radius_sum(const Partition& partition) {
  const int c = partition.c;
  std::vector<std::pair<double, double>> rs(static_cast<std::size_t>(c));
  for (int s = 0; s < c; ++s) {
    rs[static_cast<std::size_t>(s)] = {partition.radii(s),
                                       static_cast<double>(partition.sizes[static_cast<std::size_t>(s)])};
  }
  std::stable_sort(rs.begin(), rs.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  double r = 0.0;
  double suffix = 0.0;
  for (int s = c - 1; s >= 0; --s) {
    r += rs[static_cast<std::size_t>(s)].first * rs[static_cast<std::size_t>(s)].first *
         rs[static_cast<std::size_t>(s)].second * suffix;
    suffix += rs[static_cast<std::size_t>(s)].second;
  }
  return r;
}

double lowrank_frobenius_bound(const BlockLowRank& blr, std::optional<double> lipschitz) {
  const double lip = lipschitz ? *lipschitz : gaussian_lipschitz(blr.kernel(), blr.order());
  const double r = partition_radius_sum(blr.partition());
  const double kpow = std::pow(static_cast<double>(blr.rank()), -1.0 / static_cast<double>(blr.dimension()));
  return 4.0 * lip * kpow * std::sqrt(2.0 * r);
}

double lowrank_entropy_error_bound(const GramMatrix& gram, const BlockLowRank& blr, double alpha,
                                   std::optional<double> lipschitz) {
  check_alpha(alpha);
  if (gram.n() != blr.order()) throw std::invalid_argument("gram order does not match operator");
  const Spectrum spectrum = eigen_spectrum(gram);
  const double lambda_min = spectrum.lambda(spectrum.lambda.size() - 1);
  if (!(lambda_min > 0.0)) {
    throw NumericError("gram matrix is singular; the perturbation bound is undefined");
  }
  const double lip = lipschitz ? *lipschitz : gaussian_lipschitz(blr.kernel(), blr.order());
  const double r = partition_radius_sum(blr.partition());
  const double kpow = std::pow(static_cast<double>(blr.rank()), -1.0 / static_cast<double>(blr.dimension()));
  const double arg =
      1.0 - 4.0 * std::sqrt(2.0 * r * static_cast<double>(blr.order())) * lip * kpow / lambda_min;
  if (!(arg > 0.0)) return std::numeric_limits<double>::infinity();
  return std::abs(alpha / (1.0 - alpha) * std::log2(arg));
}

}  // namespace rentropy
