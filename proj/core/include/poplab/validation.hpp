#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace poplab::validation {

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;       // instances examined
    std::size_t checks = 0;      // individual assertions evaluated
    std::size_t violations = 0;
    std::vector<std::string> notes;  // first few violations, then summary lines
    double seconds = 0.0;

    bool passed() const noexcept { return violations == 0 && cases > 0; }
};

struct PartitionOptions {
    std::size_t instances = 10000;
    std::size_t points = 1000;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
};

// Random 1D threshold instances. Each test point is tagged by tag_point and
// then re-derived from the raw responses: E membership, the two partition
// pieces and the enlargement interval (left endpoint excused).
SuiteResult partition_suite(const PartitionOptions& opts = {});

// Same instances: every E point is accepted after responding to the Jury's
// classifier and rejected after responding to the contestant's.
SuiteResult sign_suite(const PartitionOptions& opts = {});

struct IdentityOptions {
    std::size_t reports = 2000;
    std::size_t points = 500;
    std::uint64_t seed = 2;
    std::size_t threads = 0;
};

// PopReports from mixed settings (1D and 2D, informed, one-sided and
// uninformed contestants, safe responses); both count identities must hold.
SuiteResult identity_suite(const IdentityOptions& opts = {});

struct ConditionOptions {
    std::size_t sufficient_cases = 500;
    std::size_t boundary_cases = 200;
    std::size_t points = 2000;
    std::size_t max_draws = 2000000;
    std::uint64_t seed = 3;
};

// Realizable 1D instances. Sufficient side: when mass(E) > 2 eps1 on an
// instance, its POP is positive. Converse side: with t_f < t and
// eps2 > 2 eps1, mass(E) <= 2 eps1 gives POP <= 0. Both are checked on the
// finite sample and on the exact population quantities.
SuiteResult condition_suite(const ConditionOptions& opts = {});

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, std::size_t threads = 0);

}  // namespace poplab::validation
