#ifndef SPACESAMP_SPACESAMP_HPP
#define SPACESAMP_SPACESAMP_HPP

#include "design.hpp"
#include "discrete_dist.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "inclusion.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "simlab.hpp"
#include "spacing_vector_dist.hpp"
#include "special.hpp"

#endif
