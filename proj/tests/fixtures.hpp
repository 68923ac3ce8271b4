#ifndef SEMGRAPH_TESTS_FIXTURES_HPP
#define SEMGRAPH_TESTS_FIXTURES_HPP

#include <string_view>

namespace fixtures {

// lpp_1943.1161 "You are like my fox when I first knew him."
inline constexpr std::string_view kFoxPenman = R"((r / resemble-01
  :ARG1 (y / you)
  :ARG2 (f / fox
    :poss (i / i))
  :time (k / know-02
    :ARG0 i
    :ARG1 f
    :ord (o / ordinal-entity :value 1))))";

// p52/d2324 "Fifteen is not a prime number."
inline constexpr std::string_view kPrimeSbn = R"(                  NEGATION -1
be.v.01           Theme 15 Co-Theme +1
prime_number.n.01
)";

// Hand-built double negation in the shape of p18/d1454 "Everybody left."
inline constexpr std::string_view kEverybodyLeftSbn = R"(%%% Everybody left .
NEGATION -1
person.n.01                 % Everybody
NEGATION -1
leave.v.01   Agent -1 Time +1   % left
time.n.08    TPR now
)";

}  // namespace fixtures

#endif  // SEMGRAPH_TESTS_FIXTURES_HPP
