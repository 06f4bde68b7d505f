// Acceptance suite: one PASS/FAIL line per criterion. `--only k` runs criterion k.
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "fractal_zeta/acceptance.hpp"

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only k]\n");
      return 64;
    }
  }
  if (only < 0 || only > fzeta::acceptance_count()) {
    std::fprintf(stderr, "criterion out of range\n");
    return 64;
  }
  bool all = true;
  for (int k = 1; k <= fzeta::acceptance_count(); ++k) {
    if (only && k != only) continue;
    const auto r = fzeta::run_criterion(k);
    all = all && r.pass();
    std::printf("%s\n", fzeta::format_line(r).c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
