#pragma once

// Umbrella header.

#include "errors.hpp"
#include "plant.hpp"
#include "vehicle_model.hpp"
#include "observer.hpp"
#include "safety_controller.hpp"
#include "signal_source.hpp"
#include "delay_buffer.hpp"
#include "simulator.hpp"
#include "trajectory_io.hpp"
#include "stability.hpp"
#include "scenario.hpp"
