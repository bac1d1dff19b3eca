#pragma once

#include "barron_pde/activation.hpp"
#include "barron_pde/composition.hpp"
#include "barron_pde/counterexamples.hpp"
#include "barron_pde/elliptic.hpp"
#include "barron_pde/error.hpp"
#include "barron_pde/experiments.hpp"
#include "barron_pde/hamilton_jacobi.hpp"
#include "barron_pde/io.hpp"
#include "barron_pde/network.hpp"
#include "barron_pde/oracles.hpp"
#include "barron_pde/parabolic.hpp"
#include "barron_pde/parallel.hpp"
#include "barron_pde/profile.hpp"
#include "barron_pde/quadrature.hpp"
