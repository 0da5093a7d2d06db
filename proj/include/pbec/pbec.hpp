#pragma once

// Umbrella header for the photon-condensate simulation library.

#include "pbec/cgpe.hpp"
#include "pbec/config.hpp"
#include "pbec/constants.hpp"
#include "pbec/fft.hpp"
#include "pbec/grid.hpp"
#include "pbec/instrument.hpp"
#include "pbec/io.hpp"
#include "pbec/lda_spectrum.hpp"
#include "pbec/open_spectrum.hpp"
#include "pbec/params.hpp"
#include "pbec/pipeline.hpp"
#include "pbec/spectrum_grid.hpp"
