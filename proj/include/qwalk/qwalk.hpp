#pragma once

#include "qwalk/errors.hpp"
#include "qwalk/limits.hpp"
#include "qwalk/markov_chain.hpp"
#include "qwalk/chain_analysis.hpp"
#include "qwalk/quantum_walk.hpp"
#include "qwalk/walk_spectrum.hpp"
#include "qwalk/reflection.hpp"
#include "qwalk/search.hpp"
#include "qwalk/quantum_search.hpp"
#include "qwalk/cost_model.hpp"
#include "qwalk/brute_force.hpp"
#include "qwalk/applications.hpp"
#include "qwalk/json_io.hpp"
