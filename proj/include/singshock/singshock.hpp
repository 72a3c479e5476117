#pragma once

#include "singshock/cli.hpp"
#include "singshock/commands.hpp"
#include "singshock/errors.hpp"
#include "singshock/experiments.hpp"
#include "singshock/grid.hpp"
#include "singshock/initial.hpp"
#include "singshock/io.hpp"
#include "singshock/monitors.hpp"
#include "singshock/overlap.hpp"
#include "singshock/properties.hpp"
#include "singshock/scheme.hpp"
#include "singshock/simulation.hpp"
#include "singshock/systems.hpp"
#include "singshock/test_function.hpp"
#include "singshock/weak_residual.hpp"
