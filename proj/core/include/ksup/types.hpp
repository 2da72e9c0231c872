#pragma once

#include <Eigen/Core>

namespace ksup {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

} // namespace ksup
