#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>

#include "quadham/cli.hpp"

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  quadham::cli::Environment env;
  if (const char* scale = std::getenv("QUADHAM_TOL_SCALE")) env.tolerance_scale = scale;
  env.timestamp = utc_now();
  const std::vector<std::string> args(argv + 1, argv + argc);
  return quadham::cli::run(args, std::cout, std::cerr, env);
}
