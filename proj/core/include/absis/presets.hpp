#pragma once

#include <optional>
#include <string>
#include <vector>

#include "absis/config.hpp"

namespace absis {

// A ready-to-run bundle: a RunConfig whose builder fields read "preset",
// together with the concrete objects those fields refer to.
struct Preset {
  std::string name;
  RunConfig config;
  AgentPopulation population;
  Network network;
  std::optional<CaseSeries> data;               // embedded observations, if any
  std::optional<ParameterSet> true_parameters;  // generating values, if meaningful
};

// COVID-19 outbreak aboard the Diamond Princess cruise ship, 2020-01-20
// (day 0) through 2020-02-19 (day 30): 3711 agents of whom 2165 are elderly
// (covariate z = (1, elderly)), crew/passenger contact blocks of 1045/2666,
// recovery fixed at 1/13.5 per day, diffuse-plus-sign-constrained priors,
// and the daily cumulative confirmed-case series (two unannounced days
// filled by interpolation). Individual age x role assignments are not
// public, so they are drawn independently, matching the published totals
// exactly, from the fixed seed 20200120.
Preset diamond_princess_preset();

// Small demonstration: 30 agents on a wrapped 8-neighbour lattice simulated
// for 30 days with strongly covariate-driven infection and recovery rates.
Preset lattice_demo_preset();

const Preset* find_preset(const std::string& name);  // nullptr when unknown
std::vector<std::string> preset_names();

}  // namespace absis
