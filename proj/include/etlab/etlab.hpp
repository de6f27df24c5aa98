#pragma once

#include "etlab/bounds.hpp"
#include "etlab/constructions.hpp"
#include "etlab/dense.hpp"
#include "etlab/errors.hpp"
#include "etlab/graph.hpp"
#include "etlab/linalg_mod.hpp"
#include "etlab/modring.hpp"
#include "etlab/numtheory.hpp"
#include "etlab/rational.hpp"
#include "etlab/search.hpp"
#include "etlab/spectral.hpp"
