#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace conetess {

/// Deterministic substream RNG: a (master seed, stream index) pair fully
/// determines the draw sequence, independent of thread scheduling. Distinct
/// pairs give statistically independent streams.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::uint64_t next_u64() { return engine_(); }
  double uniform();  // [0, 1)
  double gaussian();
  /// Unbiased draw from {0, ..., count-1}.
  std::int64_t uniform_index(std::int64_t count);
  Eigen::VectorXd gaussian_vector(int d);
  /// Isotropic direction on S^{d-1}.
  Eigen::VectorXd unit_vector(int d);
  /// Orthonormal d x k frame whose column span is Haar-uniform on the
  /// Grassmannian (QR of a Gaussian matrix, R-diagonal signs fixed).
  Eigen::MatrixXd orthonormal_frame(int d, int k);

 private:
  std::uint64_t master_seed_, stream_index_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0;
};

}  // namespace conetess
