// Umbrella header.
#pragma once

#include "oikf/chi2_gate.hpp"
#include "oikf/experiments.hpp"
#include "oikf/filter.hpp"
#include "oikf/kalman.hpp"
#include "oikf/linalg.hpp"
#include "oikf/metrics.hpp"
#include "oikf/nuv.hpp"
#include "oikf/nuv_update.hpp"
#include "oikf/result_io.hpp"
#include "oikf/series.hpp"
#include "oikf/system_model.hpp"
#include "oikf/trajectory_io.hpp"
