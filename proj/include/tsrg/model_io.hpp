#pragma once

#include <filesystem>
#include <cstdint>
#include <iosfwd>

#include "tsrg/solver.hpp"

namespace tsrg {

// Binary re-generator record, little-endian throughout:
//   magic "TSRGMDL1" | u32 version | u32 kernel kind | u8 has_bandwidth |
//   f64 bandwidth | i64 n_s | i64 n_t | i64 d |
//   config: f64 lambda, mu, kappa0, rho, kappa_max, epsilon | i32 max_iters |
//   P: (n_s+n_t)*d f64, row-major | anchors: d*(n_s+n_t) f64, column-major
inline constexpr std::uint32_t kModelFormatVersion = 1;

void write_model(std::ostream& out, const TsrgModel& model);
TsrgModel read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const TsrgModel& model);
TsrgModel load_model(const std::filesystem::path& path);

}  // namespace tsrg
