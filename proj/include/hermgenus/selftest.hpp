#ifndef HERMGENUS_SELFTEST_HPP
#define HERMGENUS_SELFTEST_HPP

#include <ostream>

namespace hermgenus {

struct SelftestOptions {
    unsigned long seed = 12345;
    int oracle_depth = 0;  // 0 means the default N = e + 2 per prime
};

// Runs the invariant suites; prints one line per suite.  True iff all pass.
bool run_selftest(const SelftestOptions& opts, std::ostream& out);

} // namespace hermgenus

#endif
