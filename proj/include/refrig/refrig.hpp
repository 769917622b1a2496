#pragma once

#include "refrig/adiabatic_solver.hpp"
#include "refrig/config_io.hpp"
#include "refrig/constants.hpp"
#include "refrig/cycle_engine.hpp"
#include "refrig/error.hpp"
#include "refrig/frequency_profile.hpp"
#include "refrig/master_equation_oracle.hpp"
#include "refrig/numerics.hpp"
#include "refrig/oscillator_thermo.hpp"
#include "refrig/output.hpp"
#include "refrig/units_params.hpp"
