// Hand-written asymmetric download schedules: per node, a list of sums
// whose terms are interference symbols I_j, requested-file symbols
// x_{i,h'} at systematic positions, or raw stored code symbols.  A
// schedule is verified structurally (recoverability as a linear system
// with the interference symbols free, privacy by the masking rules) and
// can be compiled into an executable query plan.

#ifndef PIR_SCHEDULE_HPP
#define PIR_SCHEDULE_HPP

#include <string>
#include <vector>

#include "pir/protocols.hpp"

namespace pir {

struct SchedTerm {
    enum Kind { Interference, FileSymbol, CodeSymbol } kind = Interference;
    int j = 0;       // Interference: symbol index, 1-based; batch is ceil(j/k)
    int stripe = 0;  // FileSymbol/CodeSymbol: stripe, 1-based
    int coord = 0;   // FileSymbol: message coordinate h', 1-based
    int file = 0;    // CodeSymbol: explicit file, 1-based
};

struct SchedSum {
    std::vector<SchedTerm> terms;
};

struct Schedule {
    std::string name;
    int beta = 1;
    std::vector<std::vector<SchedSum>> per_node;  // size n
};

struct ScheduleVerdict {
    bool recoverable = false;
    bool priv = false;
    long long download = 0;
    Rational rate;
    std::string detail;  // names the first failing sum or symbol, when any
};

ScheduleVerdict verify_schedule(const LinearCode& code, const Schedule& sched, int f);

// Compile into a query plan for target file m; masks are seeded.
QueryPlan plan_from_schedule(const CodedStore& store, const Schedule& sched, int m, std::uint64_t seed);

}  // namespace pir

#endif
