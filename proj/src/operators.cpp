#include "entromin/operators.hpp"

#include <algorithm>
#include <numeric>

#include "entromin/dct.hpp"
#include "entromin/wavelets.hpp"

namespace entromin {

class LinearOperator::Impl {
 public:
  Impl(OperatorKind kind, OperatorDescriptor descriptor) : kind_(kind), descriptor_(std::move(descriptor)) {}
  virtual ~Impl() = default;

  virtual Vector apply(VectorCRef v) const = 0;
  virtual Vector adjoint(VectorCRef u) const = 0;
  virtual const Matrix* dense() const { return nullptr; }

  OperatorKind kind_;
  OperatorDescriptor descriptor_;
};

namespace {

OperatorDescriptor leaf(std::string generator, Index rows, Index cols) {
  OperatorDescriptor d;
  d.generator = std::move(generator);
  d.rows = rows;
  d.cols = cols;
  return d;
}

void check_underdetermined(const char* who, Index rows, Index cols) {
  if (rows <= 0 || cols <= 0) throw DomainError(std::string(who) + ": dimensions must be positive");
  if (rows > cols) {
    throw DomainError(std::string(who) + ": rows (" + std::to_string(rows) + ") must not exceed cols (" +
                      std::to_string(cols) + ")");
  }
}

class IdentityImpl final : public LinearOperator::Impl {
 public:
  explicit IdentityImpl(Index n) : Impl(OperatorKind::Identity, leaf("identity", n, n)) {}
  Vector apply(VectorCRef v) const override { return v; }
  Vector adjoint(VectorCRef u) const override { return u; }
};

class DenseImpl final : public LinearOperator::Impl {
 public:
  DenseImpl(Matrix a, OperatorDescriptor d) : Impl(OperatorKind::Dense, std::move(d)), a_(std::move(a)) {}
  Vector apply(VectorCRef v) const override { return a_ * v; }
  Vector adjoint(VectorCRef u) const override { return a_.transpose() * u; }
  const Matrix* dense() const override { return &a_; }

 private:
  Matrix a_;
};

class SrmImpl final : public LinearOperator::Impl {
 public:
  SrmImpl(Index rows, Index cols, RandomSeed seed) : Impl(OperatorKind::SRM, leaf("srm", rows, cols)), dct_(cols) {
    descriptor_.seed = seed;
    Engine engine = make_engine(seed);
    permutation_.resize(static_cast<size_t>(cols));
    std::iota(permutation_.begin(), permutation_.end(), Index{0});
    std::shuffle(permutation_.begin(), permutation_.end(), engine);
    std::bernoulli_distribution coin(0.5);
    signs_.resize(cols);
    for (Index i = 0; i < cols; ++i) signs_[i] = coin(engine) ? 1.0 : -1.0;
    std::vector<Index> all(static_cast<size_t>(cols));
    std::iota(all.begin(), all.end(), Index{0});
    std::shuffle(all.begin(), all.end(), engine);
    selected_.assign(all.begin(), all.begin() + rows);
    std::sort(selected_.begin(), selected_.end());
  }

  Vector apply(VectorCRef v) const override {
    const Index n = descriptor_.cols;
    Vector scrambled(n);
    for (Index i = 0; i < n; ++i) scrambled[i] = signs_[i] * v[permutation_[static_cast<size_t>(i)]];
    Vector spectrum(n);
    dct_.forward({scrambled.data(), static_cast<size_t>(n)}, {spectrum.data(), static_cast<size_t>(n)});
    Vector out(descriptor_.rows);
    for (Index k = 0; k < descriptor_.rows; ++k) out[k] = spectrum[selected_[static_cast<size_t>(k)]];
    return out;
  }

  Vector adjoint(VectorCRef u) const override {
    const Index n = descriptor_.cols;
    Vector spectrum = Vector::Zero(n);
    for (Index k = 0; k < descriptor_.rows; ++k) spectrum[selected_[static_cast<size_t>(k)]] = u[k];
    Vector scrambled(n);
    dct_.inverse({spectrum.data(), static_cast<size_t>(n)}, {scrambled.data(), static_cast<size_t>(n)});
    Vector out(n);
    for (Index i = 0; i < n; ++i) out[permutation_[static_cast<size_t>(i)]] = signs_[i] * scrambled[i];
    return out;
  }

 private:
  OrthonormalDct dct_;
  std::vector<Index> permutation_;
  Vector signs_;
  std::vector<Index> selected_;
};

class WaveletFrameImpl final : public LinearOperator::Impl {
 public:
  WaveletFrameImpl(Index side, int levels)
      : Impl(OperatorKind::WaveletFrame, leaf("wavelet_frame", side * side, 4 * side * side)) {
    descriptor_.side = side;
    descriptor_.levels = levels;
    for (int k = 1; k <= 4; ++k) bases_.emplace_back(k, side, levels);
  }

  Vector apply(VectorCRef v) const override {
    const Index n = descriptor_.rows;
    Vector image = Vector::Zero(n);
    for (size_t k = 0; k < bases_.size(); ++k) image += bases_[k].synthesize(v.segment(static_cast<Index>(k) * n, n));
    return 0.5 * image;
  }

  Vector adjoint(VectorCRef u) const override {
    const Index n = descriptor_.rows;
    Vector coeffs(4 * n);
    for (size_t k = 0; k < bases_.size(); ++k) coeffs.segment(static_cast<Index>(k) * n, n) = 0.5 * bases_[k].analyze(u);
    return coeffs;
  }

 private:
  std::vector<PeriodicDwt2> bases_;
};

class CompositionImpl final : public LinearOperator::Impl {
 public:
  explicit CompositionImpl(std::vector<LinearOperator> ops, OperatorDescriptor d)
      : Impl(OperatorKind::Composition, std::move(d)), ops_(std::move(ops)) {}

  Vector apply(VectorCRef v) const override {
    Vector cur = v;
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) cur = it->apply(cur);
    return cur;
  }

  Vector adjoint(VectorCRef u) const override {
    Vector cur = u;
    for (const auto& op : ops_) cur = op.adjoint(cur);
    return cur;
  }

 private:
  std::vector<LinearOperator> ops_;
};

}  // namespace

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Dense: return "Dense";
    case OperatorKind::SRM: return "SRM";
    case OperatorKind::WaveletFrame: return "WaveletFrame";
    case OperatorKind::Composition: return "Composition";
    case OperatorKind::Identity: return "Identity";
  }
  return "?";
}

LinearOperator::LinearOperator(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Index LinearOperator::rows() const { return impl_->descriptor_.rows; }
Index LinearOperator::cols() const { return impl_->descriptor_.cols; }
OperatorKind LinearOperator::kind() const { return impl_->kind_; }
const OperatorDescriptor& LinearOperator::descriptor() const { return impl_->descriptor_; }
const Matrix* LinearOperator::dense_matrix() const { return impl_->dense(); }

Vector LinearOperator::apply(VectorCRef v) const {
  check_length(std::string("apply(") + to_string(kind()) + ")", cols(), v.size());
  return impl_->apply(v);
}

Vector LinearOperator::adjoint(VectorCRef u) const {
  check_length(std::string("adjoint(") + to_string(kind()) + ")", rows(), u.size());
  return impl_->adjoint(u);
}

Matrix LinearOperator::to_dense() const {
  if (const Matrix* a = dense_matrix()) return *a;
  Matrix out(rows(), cols());
  Vector e = Vector::Zero(cols());
  for (Index j = 0; j < cols(); ++j) {
    e[j] = 1.0;
    out.col(j) = impl_->apply(e);
    e[j] = 0.0;
  }
  return out;
}

LinearOperator make_identity(Index n) {
  if (n <= 0) throw DomainError("make_identity: size must be positive");
  return LinearOperator(std::make_shared<IdentityImpl>(n));
}

LinearOperator make_dense(Matrix entries) {
  if (entries.rows() <= 0 || entries.cols() <= 0) throw DomainError("make_dense: empty matrix");
  auto d = leaf("explicit", entries.rows(), entries.cols());
  return LinearOperator(std::make_shared<DenseImpl>(std::move(entries), std::move(d)));
}

LinearOperator make_gaussian(Index rows, Index cols, RandomSeed seed) {
  check_underdetermined("make_gaussian", rows, cols);
  Engine engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) a(i, j) = normal(engine);
    a.row(i).array() -= a.row(i).mean();
    const double norm = a.row(i).norm();
    if (norm > 0.0) a.row(i) /= norm;
  }
  auto d = leaf("gaussian", rows, cols);
  d.seed = seed;
  return LinearOperator(std::make_shared<DenseImpl>(std::move(a), std::move(d)));
}

LinearOperator make_srm(Index rows, Index cols, RandomSeed seed) {
  check_underdetermined("make_srm", rows, cols);
  return LinearOperator(std::make_shared<SrmImpl>(rows, cols, seed));
}

LinearOperator make_wavelet_frame(Index side, int levels) {
  if (!is_power_of_two(side)) {
    throw DomainError("make_wavelet_frame: side must be a power of two, got " + std::to_string(side));
  }
  if (side < 4 || levels < 1 || levels > max_wavelet_levels(side)) {
    throw DomainError("make_wavelet_frame: levels must be in 1.." + std::to_string(std::max(0, max_wavelet_levels(side))) +
                      " for side " + std::to_string(side) + ", got " + std::to_string(levels));
  }
  return LinearOperator(std::make_shared<WaveletFrameImpl>(side, levels));
}

LinearOperator compose(std::vector<LinearOperator> ops) {
  if (ops.empty()) throw DomainError("compose: need at least one operator");
  OperatorDescriptor d = leaf("composition", ops.front().rows(), ops.back().cols());
  for (size_t i = 0; i + 1 < ops.size(); ++i) {
    if (ops[i].cols() != ops[i + 1].rows()) {
      throw DimensionError("compose: operator " + std::to_string(i) + " has " + std::to_string(ops[i].cols()) +
                           " cols but operator " + std::to_string(i + 1) + " has " + std::to_string(ops[i + 1].rows()) +
                           " rows");
    }
  }
  for (const auto& op : ops) d.children.push_back(op.descriptor());
  return LinearOperator(std::make_shared<CompositionImpl>(std::move(ops), std::move(d)));
}

LinearOperator rebuild(const OperatorDescriptor& d) {
  if (d.generator == "identity") return make_identity(d.rows);
  if (d.generator == "gaussian") return make_gaussian(d.rows, d.cols, d.seed);
  if (d.generator == "srm") return make_srm(d.rows, d.cols, d.seed);
  if (d.generator == "wavelet_frame") return make_wavelet_frame(d.side, d.levels);
  if (d.generator == "composition") {
    std::vector<LinearOperator> ops;
    for (const auto& c : d.children) ops.push_back(rebuild(c));
    return compose(std::move(ops));
  }
  if (d.generator == "explicit") throw FormatError("rebuild: operators built from explicit matrices carry no generator");
  throw FormatError("rebuild: unknown operator generator '" + d.generator + "'");
}

double dot_test(const LinearOperator& op, RandomSeed seed) {
  Engine engine = make_engine(seed);
  const Vector v = gaussian_vector(engine, op.cols());
  const Vector u = gaussian_vector(engine, op.rows());
  const double lhs = op.apply(v).dot(u);
  const double rhs = v.dot(op.adjoint(u));
  return std::abs(lhs - rhs) / (u.norm() * v.norm() + 1.0);
}

}  // namespace entromin
