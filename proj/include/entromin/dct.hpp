#pragma once

#include <memory>
#include <span>

#include "entromin/common.hpp"

namespace entromin {

// Orthonormal DCT-II of a fixed length (and its inverse, the orthonormal
// DCT-III), backed by FFTW r2r plans. Immutable; `forward`/`inverse` may be
// called concurrently.
class OrthonormalDct {
 public:
  explicit OrthonormalDct(Index n);
  ~OrthonormalDct();
  OrthonormalDct(const OrthonormalDct&) = delete;
  OrthonormalDct& operator=(const OrthonormalDct&) = delete;

  Index size() const { return n_; }

  void forward(std::span<const double> in, std::span<double> out) const;
  void inverse(std::span<const double> in, std::span<double> out) const;

 private:
  struct Plans;
  Index n_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace entromin
