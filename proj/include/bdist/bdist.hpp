#ifndef BDIST_BDIST_HPP
#define BDIST_BDIST_HPP

#include "bdist/analytic.hpp"
#include "bdist/chain.hpp"
#include "bdist/csv.hpp"
#include "bdist/depril.hpp"
#include "bdist/inference.hpp"
#include "bdist/pmf.hpp"
#include "bdist/renewal.hpp"
#include "bdist/sampler.hpp"
#include "bdist/symbolic.hpp"

#endif  // BDIST_BDIST_HPP
