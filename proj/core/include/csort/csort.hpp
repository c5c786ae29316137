#pragma once

// Everything in one include.
#include "csort/cost.hpp"
#include "csort/distributions.hpp"
#include "csort/dual.hpp"
#include "csort/errors.hpp"
#include "csort/layering.hpp"
#include "csort/oracle.hpp"
#include "csort/quant.hpp"
#include "csort/serialize.hpp"
#include "csort/solver.hpp"
