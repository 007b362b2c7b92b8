// Minimal library walkthrough: verify a builtin protocol, then watch the
// retrodiction game over a few thousand seeded rounds.

#include <cstdio>
#include <string>

#include "retroq/builtins.hpp"
#include "retroq/protocol.hpp"

int main(int argc, char** argv) {
    const std::string name = argc > 1 ? argv[1] : "singlet";
    const retroq::RetrodictionProtocol protocol = retroq::builtin_protocol(name);

    const retroq::VerifyReport verdict = retroq::verify_protocol(protocol);
    std::printf("protocol '%s': %zu violations, orthonormality residual %.3e\n", name.c_str(),
                verdict.violations.size(), verdict.orthonormality);

    const retroq::TrialStatistics stats =
        retroq::run_trials(protocol, 5000, 2024, retroq::TrialOptions{});
    std::printf("%llu/%llu correct retrodictions\n",
                static_cast<unsigned long long>(stats.successes),
                static_cast<unsigned long long>(stats.trials));
    for (std::size_t l = 0; l < stats.axis_chosen.size(); ++l)
        std::printf("  axis %zu: %llu rounds, %llu correct\n", l + 1,
                    static_cast<unsigned long long>(stats.axis_chosen[l]),
                    static_cast<unsigned long long>(stats.axis_successes[l]));
    return verdict.passed() && stats.successes == stats.trials ? 0 : 1;
}
