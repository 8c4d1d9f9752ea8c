#ifndef WCOH_TESTS_HELPERS_HPP
#define WCOH_TESTS_HELPERS_HPP

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "wcoh/rng.hpp"
#include "wcoh/time_series.hpp"

namespace wcoh::testing {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("wcoh_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() { std::filesystem::remove_all(dir_); }
  const std::filesystem::path& path() const { return dir_; }
  std::filesystem::path operator/(const std::string& name) const { return dir_ / name; }

 private:
  std::filesystem::path dir_;
};

inline TimeSeries make_series(const std::string& name, const std::string& start,
                              std::vector<double> values) {
  return TimeSeries{name, Date::parse(start), 1.0, std::move(values)};
}

inline TimeSeries ar1_series(std::size_t n, double phi, std::uint64_t seed,
                             const std::string& name = "ar1",
                             const std::string& start = "2011-09-14") {
  rng::Xoshiro256pp gen(rng::Stream{seed, 0});
  std::vector<double> v(n);
  v[0] = gen.normal() / std::sqrt(1.0 - phi * phi);
  for (std::size_t t = 1; t < n; ++t) v[t] = phi * v[t - 1] + gen.normal();
  return make_series(name, start, std::move(v));
}

inline TimeSeries cosine_series(std::size_t n, double period, double lag_days = 0.0,
                                double noise_sd = 0.0, std::uint64_t seed = 1,
                                const std::string& name = "cos") {
  rng::Xoshiro256pp gen(rng::Stream{seed, 0});
  std::vector<double> v(n);
  for (std::size_t t = 0; t < n; ++t) {
    v[t] = std::cos(2.0 * std::numbers::pi * (static_cast<double>(t) - lag_days) / period);
    if (noise_sd > 0.0) v[t] += noise_sd * gen.normal();
  }
  return make_series(name, "2011-09-14", std::move(v));
}

inline void write_series_csv(const std::filesystem::path& path, const TimeSeries& ts,
                             const std::string& value_column = "value") {
  std::ofstream out(path);
  out << "date," << value_column << "\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out.precision(17);
    out << ts.date_at(i).iso() << ',' << ts.values[i] << "\n";
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace wcoh::testing

#endif
