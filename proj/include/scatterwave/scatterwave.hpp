#pragma once

#include "scatterwave/errors.hpp"
#include "scatterwave/grid_medium.hpp"
#include "scatterwave/initial_data.hpp"
#include "scatterwave/engine.hpp"
#include "scatterwave/spectral.hpp"
#include "scatterwave/oracle.hpp"
#include "scatterwave/experiments.hpp"
#include "scatterwave/verification.hpp"
#include "scatterwave/csv_io.hpp"
