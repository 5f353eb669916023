#pragma once

#include "infdim/core/coefficients.hpp"
#include "infdim/core/linalg.hpp"
#include "infdim/core/quadrature.hpp"
#include "infdim/core/types.hpp"
#include "infdim/bases.hpp"
#include "infdim/diagnostics.hpp"
#include "infdim/element.hpp"
#include "infdim/function.hpp"
#include "infdim/law.hpp"
#include "infdim/operators.hpp"
#include "infdim/truncation.hpp"
