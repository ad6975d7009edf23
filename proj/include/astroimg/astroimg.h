// Umbrella header for the astroimg toolkit.
#pragma once

#include <astroimg/convolve.h>
#include <astroimg/denoise.h>
#include <astroimg/differential.h>
#include <astroimg/error.h>
#include <astroimg/filterbank.h>
#include <astroimg/fourier.h>
#include <astroimg/image.h>
#include <astroimg/morphology.h>
#include <astroimg/parallel.h>
#include <astroimg/raster_io.h>
#include <astroimg/restore.h>
#include <astroimg/segment.h>
#include <astroimg/spectrum.h>
#include <astroimg/synth.h>
