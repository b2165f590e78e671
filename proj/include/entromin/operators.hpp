#pragma once

#include <memory>
#include <string>
#include <vector>

#include "entromin/common.hpp"
#include "entromin/random.hpp"

namespace entromin {

enum class OperatorKind { Dense, SRM, WaveletFrame, Composition, Identity };

const char* to_string(OperatorKind kind);

// Enough information to rebuild an operator bit-for-bit. Operators built from
// an explicit matrix have generator "explicit" and cannot be rebuilt.
struct OperatorDescriptor {
  std::string generator;  // identity | explicit | gaussian | srm | wavelet_frame | composition
  Index rows = 0;
  Index cols = 0;
  RandomSeed seed;
  Index side = 0;
  int levels = 0;
  std::vector<OperatorDescriptor> children;
};

/// A linear map R^cols -> R^rows with its exact adjoint. Cheap to copy; the
/// underlying state is shared and immutable.
class LinearOperator {
 public:
  class Impl;

  explicit LinearOperator(std::shared_ptr<const Impl> impl);

  Index rows() const;
  Index cols() const;
  OperatorKind kind() const;
  const OperatorDescriptor& descriptor() const;

  Vector apply(VectorCRef v) const;
  Vector adjoint(VectorCRef u) const;

  /// Materializes the operator column by column (tests and small problems).
  Matrix to_dense() const;
  /// Dense payload, when kind() == Dense; nullptr otherwise.
  const Matrix* dense_matrix() const;

 private:
  std::shared_ptr<const Impl> impl_;
};

LinearOperator make_identity(Index n);
LinearOperator make_dense(Matrix entries);

/// i.i.d. N(0,1) entries; every row is centered then scaled to unit l2 norm.
LinearOperator make_gaussian(Index rows, Index cols, RandomSeed seed);

/// U = D F R: random permutation with random sign flips (R), orthonormal
/// DCT-II (F), and `rows` distinct rows picked uniformly (D). U U^T = I.
LinearOperator make_srm(Index rows, Index cols, RandomSeed seed);

/// V = 1/2 [V_Db1 V_Db2 V_Db3 V_Db4] acting on 4 side^2 coefficients and
/// producing a vectorized side x side image. V V^T = I.
LinearOperator make_wavelet_frame(Index side, int levels);

/// ops[0] * ops[1] * ... * ops.back().
LinearOperator compose(std::vector<LinearOperator> ops);

LinearOperator rebuild(const OperatorDescriptor& descriptor);

/// |<A v, u> - <v, A^T u>| / (|u| |v| + 1) for random u, v drawn from `seed`.
double dot_test(const LinearOperator& op, RandomSeed seed);

}  // namespace entromin
