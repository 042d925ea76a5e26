#include <chrono>
#include <cstdio>
#include <string>

#include "acceptance.hpp"

using namespace rgood;
using namespace rgood::acceptance;

namespace {

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  int status = pclose(p);
  if (status != 0) out += "\n<exit " + std::to_string(status) + ">";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 1;
  double determinism_scale = argc > 2 ? std::stod(argv[2]) : 1.0;
  Battery battery(seed, Scale{1.0});
  int failed = 0;
  for (const auto& c : criteria()) {
    auto start = std::chrono::steady_clock::now();
    Json r;
    try {
      r = battery.run(c.id);
    } catch (const std::exception& e) {
      r = {{"pass", false}, {"error", e.what()}};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = r.value("pass", false) && secs <= c.limit_seconds;
    r.erase("rows");
    r.erase("pass");
    std::printf("%s %2d %-34s %8.2fs / %4.0fs  %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, c.limit_seconds,
                r.dump().c_str());
    std::fflush(stdout);
    failed += !pass;
  }

  // 13: two consecutive suite runs through the CLI, compared byte for byte.
  auto start = std::chrono::steady_clock::now();
  std::string cmd = std::string(RGOOD_CLI_PATH) + " suite --seed " + std::to_string(seed) + " --scale " +
                    std::to_string(determinism_scale);
  std::string a = capture(cmd), b = capture(cmd);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool same = !a.empty() && a == b;
  std::printf("%s 13 %-34s %8.2fs          {\"bytes\":%zu,\"scale\":%g,\"identical\":%s}\n", same ? "PASS" : "FAIL",
              "suite determinism", secs, a.size(), determinism_scale, same ? "true" : "false");
  failed += !same;
  std::printf("%d of 13 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
