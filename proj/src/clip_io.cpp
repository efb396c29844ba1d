#include "tsrg/clip_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tsrg/errors.hpp"

namespace tsrg::lbptop {

namespace {

constexpr std::array<char, 8> kClipMagic = {'L', 'B', 'P', 'C', 'L', 'I', 'P', '1'};

static_assert(std::endian::native == std::endian::little,
              "packed clip I/O assumes a little-endian host");

template <typename U>
void put(std::ostream& out, U v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(U));
}

template <typename U>
U get(std::istream& in, const std::filesystem::path& path) {
  U v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(U))) {
    throw IngestError(path.string() + ": truncated clip file");
  }
  return v;
}

// Next whitespace-separated PGM header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string token;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(c);
  }
  return token;
}

long frame_number(const std::filesystem::path& p) {
  const std::string stem = p.stem().string();
  std::string digits;
  for (auto it = stem.rbegin(); it != stem.rend() && std::isdigit(static_cast<unsigned char>(*it)); ++it) {
    digits.insert(digits.begin(), *it);
  }
  return digits.empty() ? -1 : std::stol(digits);
}

}  // namespace

void save_packed_clip(const std::filesystem::path& path, const VideoClip& clip,
                      PixelType type) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot open " + path.string() + " for writing");
  out.write(kClipMagic.data(), kClipMagic.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(clip.frames));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(clip.height));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(clip.width));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(type));
  for (double v : clip.pixels) {
    if (type == PixelType::U8) {
      put<std::uint8_t>(out, static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)));
    } else {
      put<double>(out, v);
    }
  }
}

VideoClip load_packed_clip(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open clip " + path.string());
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kClipMagic) {
    throw IngestError(path.string() + ": not a packed clip (bad magic)");
  }
  const auto t = get<std::uint32_t>(in, path);
  const auto h = get<std::uint32_t>(in, path);
  const auto w = get<std::uint32_t>(in, path);
  const auto type = get<std::uint32_t>(in, path);
  if (t == 0 || h == 0 || w == 0 || t > 100000 || h > 100000 || w > 100000) {
    throw IngestError(path.string() + ": implausible clip dimensions");
  }
  const std::size_t count = static_cast<std::size_t>(t) * h * w;
  std::vector<double> pixels(count);
  if (type == static_cast<std::uint32_t>(PixelType::U8)) {
    for (auto& v : pixels) v = get<std::uint8_t>(in, path);
  } else if (type == static_cast<std::uint32_t>(PixelType::F64)) {
    for (auto& v : pixels) v = get<double>(in, path);
  } else {
    throw IngestError(path.string() + ": unknown pixel dtype " + std::to_string(type));
  }
  return VideoClip(static_cast<int>(t), static_cast<int>(h), static_cast<int>(w),
                   std::move(pixels));
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open image " + path.string());
  const std::string kind = pgm_token(in);
  if (kind != "P5" && kind != "P2") {
    throw IngestError(path.string() + ": only P5/P2 PGM images are supported");
  }
  GrayImage img;
  int maxval = 0;
  try {
    img.width = std::stoi(pgm_token(in));
    img.height = std::stoi(pgm_token(in));
    maxval = std::stoi(pgm_token(in));
  } catch (const std::exception&) {
    throw IngestError(path.string() + ": malformed PGM header");
  }
  if (img.width < 1 || img.height < 1 || maxval < 1 || maxval > 255) {
    throw IngestError(path.string() + ": unsupported PGM geometry or depth");
  }
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  if (kind == "P5") {
    std::vector<unsigned char> raw(img.pixels.size());
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
      throw IngestError(path.string() + ": truncated PGM data");
    }
    std::copy(raw.begin(), raw.end(), img.pixels.begin());
  } else {
    for (auto& v : img.pixels) {
      int value;
      if (!(in >> value)) throw IngestError(path.string() + ": truncated PGM data");
      v = value;
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot open " + path.string() + " for writing");
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  for (double v : image.pixels) {
    out.put(static_cast<char>(static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L))));
  }
}

VideoClip load_clip(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IngestError("clip not found: " + path.string());
  }
  if (!std::filesystem::is_directory(path)) return load_packed_clip(path);

  std::vector<std::filesystem::path> frames;
  for (const auto& entry : std::filesystem::directory_iterator(path)) {
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (entry.is_regular_file() && ext == ".pgm") frames.push_back(entry.path());
  }
  if (frames.empty()) throw IngestError(path.string() + ": no .pgm frames found");
  std::sort(frames.begin(), frames.end(), [](const auto& a, const auto& b) {
    const long na = frame_number(a);
    const long nb = frame_number(b);
    return na != nb ? na < nb : a.filename() < b.filename();
  });

  std::vector<double> pixels;
  int height = 0;
  int width = 0;
  for (const auto& f : frames) {
    GrayImage img = read_pgm(f);
    if (pixels.empty()) {
      height = img.height;
      width = img.width;
    } else if (img.height != height || img.width != width) {
      throw IngestError(f.string() + ": frame size differs from the first frame");
    }
    pixels.insert(pixels.end(), img.pixels.begin(), img.pixels.end());
  }
  return VideoClip(static_cast<int>(frames.size()), height, width, std::move(pixels));
}

}  // namespace tsrg::lbptop
