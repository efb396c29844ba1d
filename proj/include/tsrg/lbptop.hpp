#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace tsrg::lbptop {

/// Grayscale frame stack, stored frame-major then row-major.
struct VideoClip {
  int frames = 0;
  int height = 0;
  int width = 0;
  std::vector<double> pixels;

  VideoClip() = default;
  VideoClip(int t, int h, int w, std::vector<double> data);
  VideoClip(int t, int h, int w, double fill);

  double at(int t, int y, int x) const {
    return pixels[(static_cast<std::size_t>(t) * height + y) * width + x];
  }
  double& at(int t, int y, int x) {
    return pixels[(static_cast<std::size_t>(t) * height + y) * width + x];
  }
};

struct LbpTopParams {
  int radius = 3;
  int points = 8;
  std::vector<int> grids = {1, 2, 4, 8};
  bool uniform = true;
  bool normalize = true;  // false keeps raw counts per block-plane histogram
};

enum class Plane { XY = 0, XT = 1, YT = 2 };

/// Strided 2-D slice of a clip: the XY plane at a fixed frame, the XT plane
/// at a fixed row, or the YT plane at a fixed column.
class PlaneView {
 public:
  static PlaneView of(const VideoClip& clip, Plane plane, int fixed);

  double at(int u, int v) const {
    return data_[offset_ + static_cast<std::size_t>(u) * stride_u_ +
                 static_cast<std::size_t>(v) * stride_v_];
  }
  int extent_u() const { return extent_u_; }
  int extent_v() const { return extent_v_; }

 private:
  const double* data_ = nullptr;
  std::size_t offset_ = 0;
  std::size_t stride_u_ = 0;
  std::size_t stride_v_ = 0;
  int extent_u_ = 0;
  int extent_v_ = 0;
};

/// Maps raw P-bit codes to histogram bins. In uniform mode the patterns with
/// at most two circular 0/1 transitions get their own bins in increasing code
/// order and every other code shares the final bin: P(P-1)+3 bins, 59 at P=8.
class CodeMapping {
 public:
  CodeMapping(int points, bool uniform);

  int bin(std::uint32_t code) const { return table_[code]; }
  int num_bins() const { return num_bins_; }

 private:
  std::vector<int> table_;
  int num_bins_ = 0;
};

/// Number of 0/1 transitions around the circular bit string of `code`.
int circular_transitions(std::uint32_t code, int points);

/// Circular LBP code at (cu, cv): neighbor p sits at angle 2*pi*p/points on
/// a circle of `radius`, sampled bilinearly, and sets bit p iff it is >= the
/// center. The caller guarantees the circle lies inside the plane.
std::uint32_t lbp_code(const PlaneView& plane, int cu, int cv,
                       const LbpTopParams& params);

/// Feature length: sum(g^2) * 3 * bins.
std::size_t feature_length(const LbpTopParams& params);

/// Concatenated XY/XT/YT histograms for every block of every grid, grids in
/// order, blocks row-major. Throws ClipTooSmall when a block (or the clip
/// length) is shorter than 2R+1 and NonFiniteError on bad pixels.
Eigen::VectorXd extract(const VideoClip& clip, const LbpTopParams& params = {});

}  // namespace tsrg::lbptop
