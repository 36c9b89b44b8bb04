#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "mulab/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> ids;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) ids.emplace_back(argv[++i]);
  }
  if (ids.empty()) ids = mulab::acceptance::criterion_ids();
  int failed = 0;
  for (const auto& id : ids) {
    const auto r = mulab::acceptance::run_criterion(id);
    std::printf("%s\n", mulab::acceptance::format_line(r).c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed ? 1 : 0;
}
