#pragma once

#include "rentropy/kernels.hpp"
#include "rentropy/types.hpp"

namespace rentropy {

// Matrix-free view of a symmetric operator. apply/apply_block are const and
// safe to call concurrently.
class SpectralOperator {
 public:
  virtual ~SpectralOperator() = default;
  virtual Index order() const = 0;
  virtual void apply(const Vec& x, Vec& y) const = 0;
  // Default block application loops apply over columns; dense and structured
  // implementations override with batched products.
  virtual void apply_block(const ColMat& x, ColMat& y) const;
};

class DenseOperator final : public SpectralOperator {
 public:
  explicit DenseOperator(const GramMatrix& gram) : g_(&gram.g) {}
  explicit DenseOperator(const RowMat& m) : g_(&m) {}

  Index order() const override { return g_->rows(); }
  void apply(const Vec& x, Vec& y) const override { kernels::matvec(*g_, x, y); }
  void apply_block(const ColMat& x, ColMat& y) const override {
    kernels::apply_block(*g_, x, y);
  }

 private:
  const RowMat* g_;  // not owned
};

}  // namespace rentropy
