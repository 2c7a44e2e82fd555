#include <chrono>
#include <cstdio>

#include "pisym/corpus.hpp"

// Times the verification corpus on the serial and parallel lanes and checks
// that they agree criterion by criterion.
int main() {
    using clock = std::chrono::steady_clock;

    auto t0 = clock::now();
    auto serial = pisym::run_acceptance(false);
    auto t1 = clock::now();
    auto parallel = pisym::run_acceptance(true);
    auto t2 = clock::now();

    auto ms = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
    };
    const long long serial_ms = ms(t0, t1);
    const long long parallel_ms = ms(t1, t2);

    bool agree = serial.size() == parallel.size();
    if (agree)
        for (std::size_t i = 0; i < serial.size(); ++i)
            agree = agree && serial[i].id == parallel[i].id && serial[i].pass == parallel[i].pass;

    std::printf("serial:   %lld ms\n", serial_ms);
    std::printf("parallel: %lld ms\n", parallel_ms);
    if (parallel_ms > 0)
        std::printf("speedup:  %.2fx\n", static_cast<double>(serial_ms) / parallel_ms);
    std::printf("lanes agree: %s\n", agree ? "yes" : "NO");
    return agree ? 0 : 1;
}
