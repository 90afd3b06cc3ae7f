#pragma once

#include "riemann/brockett.hpp"
#include "riemann/convergence.hpp"
#include "riemann/core.hpp"
#include "riemann/eigensolvers.hpp"
#include "riemann/jacobi.hpp"
#include "riemann/line_search.hpp"
#include "riemann/manifold.hpp"
#include "riemann/random.hpp"
#include "riemann/rotation.hpp"
#include "riemann/solvers.hpp"
#include "riemann/sphere.hpp"
