#pragma once

#include <gsp/error.hpp>
#include <gsp/generators.hpp>
#include <gsp/graph.hpp>
#include <gsp/local_operator.hpp>
#include <gsp/multi_snapshot.hpp>
#include <gsp/prony.hpp>
#include <gsp/sampling.hpp>
#include <gsp/simplicial.hpp>
#include <gsp/spectral.hpp>
#include <gsp/tolerances.hpp>
