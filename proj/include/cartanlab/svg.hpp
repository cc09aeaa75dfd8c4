#pragma once

// Static SVG figures: kernel lines and sign chambers of a rank-2 family, the
// s_{k+1}/s_k ratio profile of a multiplicative semigroup, and Brin-Katok
// count decay.

#include <string>

#include "cartanlab/empirical.hpp"
#include "cartanlab/lyapunov_chambers.hpp"
#include "cartanlab/toral_actions.hpp"

namespace cartanlab {

std::string chambers_svg(const FunctionalFamily& family, const ChamberDiagram& diagram);
std::string furstenberg_svg(const FurstenbergProfile& profile);
std::string brin_katok_svg(const EntropyReport& report);

}  // namespace cartanlab
