#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "texnoise/imaging.hpp"

namespace testing_support {

inline texnoise::imaging::GrayImage random_image(int width, int height, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(width) * height);
  for (auto& x : v) x = dist(rng);
  return {width, height, std::move(v)};
}

// Random multiples of 1/255, the values an 8-bit file decodes to.
inline texnoise::imaging::GrayImage random_8bit_image(int width, int height, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(0, 255);
  std::vector<double> v(static_cast<std::size_t>(width) * height);
  for (auto& x : v) x = dist(rng) / 255.0;
  return {width, height, std::move(v)};
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("texnoise-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
