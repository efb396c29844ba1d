#include "tsrg/model_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "tsrg/errors.hpp"

namespace tsrg {

namespace {

constexpr std::array<char, 8> kMagic = {'T', 'S', 'R', 'G', 'M', 'D', 'L', '1'};

template <typename U>
U byteswap_if_big(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    U out = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      out = static_cast<U>((out << 8) | ((v >> (8 * i)) & 0xFF));
    }
    return out;
  }
  return v;
}

template <typename U>
void put_raw(std::ostream& out, U v) {
  v = byteswap_if_big(v);
  char buf[sizeof(U)];
  std::memcpy(buf, &v, sizeof(U));
  out.write(buf, sizeof(U));
}

template <typename U>
U get_raw(std::istream& in) {
  char buf[sizeof(U)];
  if (!in.read(buf, sizeof(U))) throw FormatError("model file truncated");
  U v;
  std::memcpy(&v, buf, sizeof(U));
  return byteswap_if_big(v);
}

void put_f64(std::ostream& out, double v) { put_raw(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_raw<std::uint64_t>(in)); }
void put_i64(std::ostream& out, std::int64_t v) { put_raw(out, static_cast<std::uint64_t>(v)); }
std::int64_t get_i64(std::istream& in) { return static_cast<std::int64_t>(get_raw<std::uint64_t>(in)); }

}  // namespace

void write_model(std::ostream& out, const TsrgModel& model) {
  out.write(kMagic.data(), kMagic.size());
  put_raw<std::uint32_t>(out, kModelFormatVersion);
  put_raw<std::uint32_t>(out, model.kernel.kind == KernelKind::Linear ? 0u : 1u);
  put_raw<std::uint8_t>(out, model.kernel.bandwidth ? 1 : 0);
  put_f64(out, model.kernel.bandwidth.value_or(0.0));
  put_i64(out, model.n_s);
  put_i64(out, model.n_t);
  put_i64(out, model.d());

  const SolverConfig& c = model.config;
  for (double v : {c.lambda, c.mu, c.kappa0, c.rho, c.kappa_max, c.epsilon}) put_f64(out, v);
  put_raw<std::uint32_t>(out, static_cast<std::uint32_t>(c.max_iters));

  for (Eigen::Index i = 0; i < model.p.rows(); ++i) {
    for (Eigen::Index j = 0; j < model.p.cols(); ++j) put_f64(out, model.p(i, j));
  }
  const Eigen::MatrixXd& a = model.anchors.data();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) put_f64(out, a(i, j));
  }
  if (!out) throw FormatError("failed writing model");
}

TsrgModel read_model(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError("not a TSRG model file (bad magic)");
  }
  const auto version = get_raw<std::uint32_t>(in);
  if (version != kModelFormatVersion) {
    throw FormatError("unsupported model format version " + std::to_string(version));
  }
  TsrgModel model;
  const auto kind = get_raw<std::uint32_t>(in);
  if (kind > 1) throw FormatError("unknown kernel kind in model file");
  model.kernel.kind = kind == 0 ? KernelKind::Linear : KernelKind::Gaussian;
  const bool has_bw = get_raw<std::uint8_t>(in) != 0;
  const double bw = get_f64(in);
  if (has_bw) model.kernel.bandwidth = bw;
  model.n_s = get_i64(in);
  model.n_t = get_i64(in);
  const std::int64_t d = get_i64(in);
  constexpr std::int64_t kLimit = std::int64_t{1} << 31;
  if (model.n_s < 1 || model.n_t < 1 || d < 1 || model.n_s > kLimit ||
      model.n_t > kLimit || d > kLimit) {
    throw FormatError("implausible shape in model file");
  }

  SolverConfig& c = model.config;
  c.lambda = get_f64(in);
  c.mu = get_f64(in);
  c.kappa0 = get_f64(in);
  c.rho = get_f64(in);
  c.kappa_max = get_f64(in);
  c.epsilon = get_f64(in);
  c.max_iters = static_cast<int>(get_raw<std::uint32_t>(in));

  const Eigen::Index n = model.n_s + model.n_t;
  model.p.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) model.p(i, j) = get_f64(in);
  }
  Eigen::MatrixXd anchors(d, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) anchors(i, j) = get_f64(in);
  }
  model.anchors = FeatureMatrix(std::move(anchors));
  model.kernel.validate();
  return model;
}

void save_model(const std::filesystem::path& path, const TsrgModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_model(out, model);
}

TsrgModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_model(in);
}

}  // namespace tsrg
