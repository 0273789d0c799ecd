#pragma once

#include <string>

#include "machine.hpp"

namespace rmpg::tests {

// Alternates one increment with a zero test forever; the configuration
// cycle (q1,0) -> (p1,0) -> (q1,0) has period two.
inline const char* kLoopMachine = R"(counters: 1
left q0 q1 qf
right p0 p1
init q0
final qf
q0: goto p0
p0: inc c goto q1
q1: if c=0 goto p1 else dec goto p1
p1: goto q1
)";

// Two increments, two decrements, a passing zero test, then the final
// state. Hand execution: q0 -> p0 -> q1(c=1) -> p1 -> q2(c=2) -> p2(c=1)
// -> q3 -> p3(c=0) -> q4 -> p4 -> qf, ten steps.
inline const char* kHaltMachine = R"(counters: 1
left q0 q1 q2 q3 q4 qf
right p0 p1 p2 p3 p4 pF pX
init q0
final qf
q0: goto p0
p0: inc c goto q1
q1: goto p1
p1: inc c goto q2
q2: if c=0 goto pF else dec goto p2
p2: goto q3
q3: if c=0 goto pF else dec goto p3
p3: goto q4
q4: if c=0 goto p4 else dec goto pX
p4: goto qf
pF: goto q0
pX: goto q0
)";

// Two-counter variant of the halting fixture; touches both counters.
inline const char* kHaltMachine2 = R"(counters: 2
left q0 q1 q2 q3 q4 qf
right p0 p1 p2 p3 p4 pF pX
init q0
final qf
q0: goto p0
p0: inc c1 goto q1
q1: goto p1
p1: inc c2 goto q2
q2: if c1=0 goto pF else dec goto p2
p2: goto q3
q3: if c2=0 goto pF else dec goto p3
p3: goto q4
q4: if c1=0 goto p4 else dec goto pX
p4: goto qf
pF: goto q0
pX: goto q0
)";

// Non-halting two-counter machine cycling through both counters.
inline const char* kLoopMachine2 = R"(counters: 2
left q0 q1 q2 qf
right p0 p1 p2
init q0
final qf
q0: goto p0
p0: inc c1 goto q1
q1: if c1=0 goto p1 else dec goto p1
p1: inc c2 goto q2
q2: if c2=0 goto p2 else dec goto p2
p2: goto q0
)";

inline TwoSidedMachine loop_machine() { return parse_machine(kLoopMachine); }
inline TwoSidedMachine halt_machine() { return parse_machine(kHaltMachine); }
inline TwoSidedMachine halt_machine2() { return parse_machine(kHaltMachine2); }
inline TwoSidedMachine loop_machine2() { return parse_machine(kLoopMachine2); }

} // namespace rmpg::tests
