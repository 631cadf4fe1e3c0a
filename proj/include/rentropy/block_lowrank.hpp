#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rentropy/operators.hpp"
#include "rentropy/types.hpp"

namespace rentropy {

struct Partition {
  std::vector<int> assignments;     // cluster index per sample
  int c = 0;                        // cluster count
  Vec radii;                        // max member distance to centroid
  std::vector<Index> sizes;         // members per cluster, sum = n
  RowMat centroids;                 // c by d
  double objective = 0.0;           // sum_s (1/|V_s|) sum_{i,j in V_s} |x_i-x_j|^2
  std::vector<double> objective_trace;  // objective after each Lloyd update
};

// Lloyd's algorithm from k-means++ seeding. Ties in assignment go to the
// lowest cluster index; an emptied cluster is re-seeded with the farthest
// point of the largest cluster. Stops on assignment fixpoint or relative
// objective improvement below 1e-6.
Partition kmeans_partition(const SampleSet& data, int c, std::uint64_t seed, int max_iters = 100);

struct SvdFactors {
  ColMat u;   // n_r by k
  Vec sigma;  // k, non-negative non-increasing
  ColMat v;   // n_c by k; block ~ u * diag(sigma) * v'
};

// Range-finder with `oversample` extra columns and one power iteration,
// then an exact SVD of the projected block.
SvdFactors randomized_svd(const RowMat& block, int k, int oversample, std::uint64_t seed);

// Gram approximation with exact diagonal blocks and rank-k off-diagonal
// blocks (stored once for s<t, mirrored by transposition). Matvec cost is
// O(n^2/c + nck).
class BlockLowRank final : public SpectralOperator {
 public:
  Index order() const override { return n_; }
  void apply(const Vec& x, Vec& y) const override;
  void apply_block(const ColMat& x, ColMat& y) const override;

  RowMat to_dense() const;

  // Rayleigh-quotient probe for gross PSD loss; sets and returns psd_ok.
  bool spot_check_psd(int probes = 16, std::uint64_t seed = 0);

  const Partition& partition() const { return partition_; }
  const KernelSpec& kernel() const { return kernel_; }
  int rank() const { return rank_; }
  Index dimension() const { return d_; }
  bool psd_checked() const { return psd_checked_; }
  bool psd_ok() const { return psd_ok_; }

 private:
  friend BlockLowRank build_block_lowrank(const SampleSet&, const KernelSpec&, int, int,
                                          std::uint64_t);

  Index n_ = 0, d_ = 0;
  int rank_ = 0;
  KernelSpec kernel_;
  Partition partition_;
  std::vector<Index> perm_;      // packed position -> original index
  std::vector<Index> offsets_;   // c+1 block boundaries in packed order
  std::vector<RowMat> diag_;     // exact diagonal blocks
  std::vector<std::vector<SvdFactors>> off_;  // off_[s][t-s-1] for t > s
  bool psd_checked_ = false;
  bool psd_ok_ = true;
};

// Shift-invariant kernels only; polynomial kernels are refused. c=1 stores
// the exact dense Gram. Per-block rank is min(k, block widths), so
// k >= max block width reproduces the Gram losslessly.
BlockLowRank build_block_lowrank(const SampleSet& data, const KernelSpec& spec, int c, int k,
                                 std::uint64_t seed);

Vec blr_matvec(const BlockLowRank& blr, const Vec& v);

// Suggested hyperparameters: c ~ n^(1/4), k ~ sqrt(n).
int default_cluster_count(Index n);
int default_rank(Index n);

// Lipschitz constant of the normalized gaussian Gram entry as a function of
// the sample difference: 1 / (sigma * sqrt(e) * n).
double gaussian_lipschitz(const KernelSpec& spec, Index n);

// r = sum_i r_i^2 |V_i| sum_{j>i} |V_j| with clusters sorted by radius.
double partition_radius_sum(const Partition& partition);

// Frobenius bound 4 L k^(-1/d) sqrt(2 r) on |G - G~|_F.
double lowrank_frobenius_bound(const BlockLowRank& blr,
                               std::optional<double> lipschitz = std::nullopt);

// Entropy perturbation bound |alpha/(1-alpha) log2(1 - 4 sqrt(2 r n) L
// k^(-1/d) / lambda_min(G))|; +inf when the log argument is non-positive.
// Needs the exact spectrum of G, so it is a small-n diagnostic.
double lowrank_entropy_error_bound(const GramMatrix& gram, const BlockLowRank& blr, double alpha,
                                   std::optional<double> lipschitz = std::nullopt);

}  // namespace rentropy
