#pragma once

#include <array>
#include <string>
#include <vector>

#include "lobsim/lob.h"

namespace lobsim::tools {

struct GoldenCase {
    std::string name;
    LobSnapshot before;
    LobSnapshot after;
    std::array<long long, 3> expected;
};

/// The four reference transitions from the worked MLOFI example book.
std::vector<GoldenCase> golden_cases();

}  // namespace lobsim::tools
