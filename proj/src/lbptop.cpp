#include "tsrg/lbptop.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "tsrg/errors.hpp"

namespace tsrg::lbptop {

VideoClip::VideoClip(int t, int h, int w, std::vector<double> data)
    : frames(t), height(h), width(w), pixels(std::move(data)) {
  if (t < 1 || h < 1 || w < 1) throw DimensionError("clip dimensions must be positive");
  if (pixels.size() != static_cast<std::size_t>(t) * h * w) {
    throw DimensionError("clip pixel count does not match T*H*W");
  }
}

VideoClip::VideoClip(int t, int h, int w, double fill)
    : VideoClip(t, h, w,
                std::vector<double>(static_cast<std::size_t>(std::max(t, 0)) *
                                        std::max(h, 0) * std::max(w, 0),
                                    fill)) {}

PlaneView PlaneView::of(const VideoClip& clip, Plane plane, int fixed) {
  PlaneView v;
  v.data_ = clip.pixels.data();
  const std::size_t frame = static_cast<std::size_t>(clip.height) * clip.width;
  switch (plane) {
    case Plane::XY:  // u = x, v = y at frame `fixed`
      v.offset_ = static_cast<std::size_t>(fixed) * frame;
      v.stride_u_ = 1;
      v.stride_v_ = static_cast<std::size_t>(clip.width);
      v.extent_u_ = clip.width;
      v.extent_v_ = clip.height;
      break;
    case Plane::XT:  // u = x, v = t at row `fixed`
      v.offset_ = static_cast<std::size_t>(fixed) * clip.width;
      v.stride_u_ = 1;
      v.stride_v_ = frame;
      v.extent_u_ = clip.width;
      v.extent_v_ = clip.frames;
      break;
    case Plane::YT:  // u = y, v = t at column `fixed`
      v.offset_ = static_cast<std::size_t>(fixed);
      v.stride_u_ = static_cast<std::size_t>(clip.width);
      v.stride_v_ = frame;
      v.extent_u_ = clip.height;
      v.extent_v_ = clip.frames;
      break;
  }
  return v;
}

int circular_transitions(std::uint32_t code, int points) {
  int transitions = 0;
  for (int p = 0; p < points; ++p) {
    const auto a = (code >> p) & 1u;
    const auto b = (code >> ((p + 1) % points)) & 1u;
    transitions += a != b ? 1 : 0;
  }
  return transitions;
}

CodeMapping::CodeMapping(int points, bool uniform) {
  if (points < 1 || points > 24) throw SpecError("LBP points must be in 1..24");
  const std::uint32_t codes = 1u << points;
  table_.resize(codes);
  if (!uniform) {
    for (std::uint32_t c = 0; c < codes; ++c) table_[c] = static_cast<int>(c);
    num_bins_ = static_cast<int>(codes);
    return;
  }
  int next = 0;
  for (std::uint32_t c = 0; c < codes; ++c) {
    table_[c] = circular_transitions(c, points) <= 2 ? next++ : -1;
  }
  for (auto& b : table_) {
    if (b < 0) b = next;
  }
  num_bins_ = next + 1;
}

namespace {

struct Offset {
  int base_u;     // floor of the u offset
  int base_v;
  double frac_u;  // in [0, 1)
  double frac_v;
};

// Circle offsets snapped to a 2^-30 grid so mirrored angles give exactly
// mirrored offsets and integer positions come out exact.
std::vector<Offset> circle_offsets(const LbpTopParams& params) {
  constexpr double kGrid = 1073741824.0;  // 2^30
  std::vector<Offset> out;
  out.reserve(static_cast<std::size_t>(params.points));
  for (int p = 0; p < params.points; ++p) {
    const double angle = 2.0 * std::numbers::pi * p / params.points;
    const double du = std::round(params.radius * std::cos(angle) * kGrid) / kGrid;
    const double dv = std::round(-params.radius * std::sin(angle) * kGrid) / kGrid;
    const double fu = std::floor(du);
    const double fv = std::floor(dv);
    out.push_back({static_cast<int>(fu), static_cast<int>(fv), du - fu, dv - fv});
  }
  return out;
}

// Neighbor minus center, expanded so every term is a pixel difference: exact
// for integer-valued input and unchanged by a global intensity shift.
std::uint32_t code_at(const PlaneView& plane, int cu, int cv,
                      const std::vector<Offset>& offsets) {
  const double center = plane.at(cu, cv);
  std::uint32_t code = 0;
  for (std::size_t p = 0; p < offsets.size(); ++p) {
    const Offset& o = offsets[p];
    const int u = cu + o.base_u;
    const int v = cv + o.base_v;
    const double a = plane.at(u, v);
    double diff = a - center;
    if (o.frac_u > 0.0) diff += o.frac_u * (plane.at(u + 1, v) - a);
    if (o.frac_v > 0.0) diff += o.frac_v * (plane.at(u, v + 1) - a);
    if (o.frac_u > 0.0 && o.frac_v > 0.0) {
      diff += o.frac_u * o.frac_v *
              (a - plane.at(u + 1, v) - plane.at(u, v + 1) + plane.at(u + 1, v + 1));
    }
    if (diff >= 0.0) code |= 1u << p;
  }
  return code;
}

void validate_params(const LbpTopParams& params) {
  if (params.radius < 1) throw SpecError("LBP radius must be positive");
  if (params.points < 1 || params.points > 24) throw SpecError("LBP points must be in 1..24");
  if (params.grids.empty()) throw SpecError("LBP-TOP needs at least one grid");
  for (int g : params.grids) {
    if (g < 1) throw SpecError("grid divisions must be positive");
  }
}

}  // namespace

std::uint32_t lbp_code(const PlaneView& plane, int cu, int cv,
                       const LbpTopParams& params) {
  return code_at(plane, cu, cv, circle_offsets(params));
}

std::size_t feature_length(const LbpTopParams& params) {
  std::size_t blocks = 0;
  for (int g : params.grids) blocks += static_cast<std::size_t>(g) * g;
  const CodeMapping mapping(params.points, params.uniform);
  return blocks * 3 * static_cast<std::size_t>(mapping.num_bins());
}

Eigen::VectorXd extract(const VideoClip& clip, const LbpTopParams& params) {
  validate_params(params);
  if (clip.pixels.size() != static_cast<std::size_t>(clip.frames) * clip.height * clip.width ||
      clip.frames < 1) {
    throw DimensionError("malformed clip");
  }
  for (double v : clip.pixels) {
    if (!std::isfinite(v)) throw NonFiniteError("clip contains a non-finite pixel");
  }
  const int r = params.radius;
  const int min_extent = 2 * r + 1;
  if (clip.frames < min_extent) {
    throw ClipTooSmall("clip has " + std::to_string(clip.frames) +
                       " frames; radius " + std::to_string(r) + " needs at least " +
                       std::to_string(min_extent));
  }

  const CodeMapping mapping(params.points, params.uniform);
  const auto offsets = circle_offsets(params);
  const int bins = mapping.num_bins();
  Eigen::VectorXd features = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(feature_length(params)));

  Eigen::Index cursor = 0;
  for (int g : params.grids) {
    for (int by = 0; by < g; ++by) {
      const int y0 = by * clip.height / g;
      const int y1 = (by + 1) * clip.height / g;
      for (int bx = 0; bx < g; ++bx) {
        const int x0 = bx * clip.width / g;
        const int x1 = (bx + 1) * clip.width / g;
        if (y1 - y0 < min_extent || x1 - x0 < min_extent) {
          throw ClipTooSmall("grid " + std::to_string(g) + "x" + std::to_string(g) +
                             " gives " + std::to_string(y1 - y0) + "x" +
                             std::to_string(x1 - x0) + " blocks; radius " +
                             std::to_string(r) + " needs at least " +
                             std::to_string(min_extent));
        }
        std::array<Eigen::Index, 3> base = {cursor, cursor + bins, cursor + 2 * bins};
        for (int t = r; t < clip.frames - r; ++t) {
          const PlaneView xy = PlaneView::of(clip, Plane::XY, t);
          for (int y = y0 + r; y < y1 - r; ++y) {
            const PlaneView xt = PlaneView::of(clip, Plane::XT, y);
            for (int x = x0 + r; x < x1 - r; ++x) {
              const PlaneView yt = PlaneView::of(clip, Plane::YT, x);
              features(base[0] + mapping.bin(code_at(xy, x, y, offsets))) += 1.0;
              features(base[1] + mapping.bin(code_at(xt, x, t, offsets))) += 1.0;
              features(base[2] + mapping.bin(code_at(yt, y, t, offsets))) += 1.0;
            }
          }
        }
        if (params.normalize) {
          for (auto b : base) {
            auto hist = features.segment(b, bins);
            const double total = hist.sum();
            if (total > 0.0) hist /= total;
          }
        }
        cursor += 3 * bins;
      }
    }
  }
  return features;
}

}  // namespace tsrg::lbptop
