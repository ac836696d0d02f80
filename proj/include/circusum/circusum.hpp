#pragma once

#include "angle.hpp"
#include "bessel.hpp"
#include "calibration.hpp"
#include "detector.hpp"
#include "distribution.hpp"
#include "experiments.hpp"
#include "json_io.hpp"
#include "monitor.hpp"
#include "reference.hpp"
#include "replay.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "scale.hpp"
#include "simulation.hpp"
#include "trig_accumulator.hpp"
