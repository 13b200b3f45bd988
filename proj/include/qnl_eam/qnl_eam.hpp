#pragma once

#include "qnl_eam/assumptions.hpp"
#include "qnl_eam/banded_operator.hpp"
#include "qnl_eam/builtin_potentials.hpp"
#include "qnl_eam/checks.hpp"
#include "qnl_eam/coefficients.hpp"
#include "qnl_eam/csv.hpp"
#include "qnl_eam/errors.hpp"
#include "qnl_eam/experiments.hpp"
#include "qnl_eam/keyvalue.hpp"
#include "qnl_eam/lattice.hpp"
#include "qnl_eam/models.hpp"
#include "qnl_eam/potential.hpp"
#include "qnl_eam/potential_io.hpp"
#include "qnl_eam/region.hpp"
#include "qnl_eam/solver.hpp"
#include "qnl_eam/stability.hpp"
