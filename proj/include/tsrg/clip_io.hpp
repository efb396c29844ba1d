#pragma once

#include <filesystem>

#include "tsrg/lbptop.hpp"

namespace tsrg::lbptop {

// Packed clip file: magic "LBPCLIP1", then little-endian u32 T, H, W and a
// u32 dtype (0 = u8, 1 = f64), then T*H*W samples frame-major, row-major.
enum class PixelType : std::uint32_t { U8 = 0, F64 = 1 };

void save_packed_clip(const std::filesystem::path& path, const VideoClip& clip,
                      PixelType type = PixelType::U8);
VideoClip load_packed_clip(const std::filesystem::path& path);

/// 8-bit grayscale PGM (P5 binary or P2 ASCII).
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<double> pixels;
};
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// A directory of numbered .pgm frames (ordered by the number embedded in the
/// file name), or a packed clip file.
VideoClip load_clip(const std::filesystem::path& path);

}  // namespace tsrg::lbptop
