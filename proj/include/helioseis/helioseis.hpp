#pragma once

#include "helioseis/errors.hpp"
#include "helioseis/io.hpp"
#include "helioseis/length_spectrum.hpp"
#include "helioseis/mode_spectrum.hpp"
#include "helioseis/radial_model.hpp"
#include "helioseis/ray_kinematics.hpp"
#include "helioseis/rigidity_lab.hpp"
#include "helioseis/trace_engine.hpp"
