#ifndef LANDSCAPE_LANDSCAPE_HPP
#define LANDSCAPE_LANDSCAPE_HPP

#include "landscape/env.hpp"
#include "landscape/exact_pg.hpp"
#include "landscape/interpolate.hpp"
#include "landscape/io.hpp"
#include "landscape/limits.hpp"
#include "landscape/mdp.hpp"
#include "landscape/objectives.hpp"
#include "landscape/parallel.hpp"
#include "landscape/policy.hpp"
#include "landscape/probe.hpp"
#include "landscape/reinforce.hpp"
#include "landscape/rng.hpp"
#include "landscape/trace.hpp"

#endif
