#pragma once

#include "mcf_ttdl/design.hpp"
#include "mcf_ttdl/error.hpp"
#include "mcf_ttdl/fbg_multicavity.hpp"
#include "mcf_ttdl/format.hpp"
#include "mcf_ttdl/hetero_delay.hpp"
#include "mcf_ttdl/material.hpp"
#include "mcf_ttdl/mcf_model.hpp"
#include "mcf_ttdl/mode_solver.hpp"
#include "mcf_ttdl/nelder_mead.hpp"
#include "mcf_ttdl/parallel.hpp"
#include "mcf_ttdl/profile_fit.hpp"
#include "mcf_ttdl/report.hpp"
#include "mcf_ttdl/rf_filter.hpp"
#include "mcf_ttdl/tap_set.hpp"
#include "mcf_ttdl/units.hpp"
