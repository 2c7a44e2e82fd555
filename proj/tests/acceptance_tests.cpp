#include <cstdio>

#include "pisym/corpus.hpp"

// One line per criterion; exit status 0 iff every criterion passes.
int main() {
    int failed = 0;
    for (const auto& r : pisym::run_acceptance(true)) {
        std::printf("criterion %2d: %s — %s%s%s\n", r.id, r.pass ? "PASS" : "FAIL",
                    r.title.c_str(), r.detail.empty() ? "" : " — ", r.detail.c_str());
        if (!r.pass) ++failed;
    }
    if (failed) std::printf("%d criterion(s) failed\n", failed);
    return failed == 0 ? 0 : 1;
}
