#pragma once

// Umbrella header: pulls in the whole library.

#include "ryd/version.hpp"

#include "ryd/analysis.hpp"
#include "ryd/basis.hpp"
#include "ryd/capabilities.hpp"
#include "ryd/evolve.hpp"
#include "ryd/fit.hpp"
#include "ryd/geometry.hpp"
#include "ryd/hamiltonian.hpp"
#include "ryd/interaction.hpp"
#include "ryd/io.hpp"
#include "ryd/mis.hpp"
#include "ryd/noise.hpp"
#include "ryd/program.hpp"
#include "ryd/protocols.hpp"
#include "ryd/rng.hpp"
#include "ryd/sampler.hpp"
#include "ryd/state.hpp"
#include "ryd/udg.hpp"
#include "ryd/validate.hpp"
#include "ryd/waveform.hpp"
