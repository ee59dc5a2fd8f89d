#include "wavesys/cli/builtins.hpp"

namespace wavesys::cli {

namespace {

const char* kAcoustic = R"(# Linear acoustics with a jump in the sound speed.
name = acoustic
dimension = 1
box = -4 4
horizon = 1
padding = 2

[acoustic]
c = 1 + H(x)
rho = 1

[initial]
u0 = bump(x, 0.5)
u1 = 0

[mollifier]
mode = log

[sweep]
eps = geometric 2^-4 2^-14 11
exterior_radius = 2

[grid]
cells = 800
cfl = 0.45
boundary = constant
)";

const char* kDalembert = R"(# Constant-coefficient standing wave with a closed-form solution.
name = dalembert
dimension = 1
box = 0 1
horizon = 1
padding = 2

[coefficients]
R = 1

[initial]
u0 = sin(2*pi*x)
u1 = 0

[sweep]
eps = geometric 2^-4 2^-14 11

[grid]
cells = 200
cfl = 0.45
boundary = periodic
)";

const char* kDamped = R"(# Spatially constant damped oscillation; reduces to an ODE.
name = damped
dimension = 1
box = 0 1
horizon = 1
padding = 2

[coefficients]
R = 1
a = -1

[initial]
u0 = 0
u1 = 1

[sweep]
eps = geometric 2^-4 2^-14 11

[grid]
cells = 200
cfl = 0.45
boundary = periodic
)";

const char* kGt1d = R"(# One-dimensional metric with a jump, cut off and constant outside |x| <= 2.
name = gt-1d
dimension = 1
box = -4 4
horizon = 1
padding = 2

[coefficients]
R = 1 + H(x)

[initial]
u0 = bump(x, 0.5)
u1 = 0

[mollifier]
mode = log

[sweep]
eps = geometric 2^-4 2^-14 11
exterior_radius = 2

[grid]
cells = 800
cfl = 0.45
boundary = constant
)";

}  // namespace

const std::map<std::string, std::string>& builtin_specs() {
  static const std::map<std::string, std::string> specs{
      {"acoustic", kAcoustic},
      {"dalembert", kDalembert},
      {"damped", kDamped},
      {"gt-1d", kGt1d},
  };
  return specs;
}

}  // namespace wavesys::cli
