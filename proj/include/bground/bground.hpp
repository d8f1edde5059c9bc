#ifndef BGROUND_BGROUND_HPP
#define BGROUND_BGROUND_HPP

#include "bground/asymptotics.hpp"
#include "bground/bounds.hpp"
#include "bground/ensemble.hpp"
#include "bground/errors.hpp"
#include "bground/format.hpp"
#include "bground/islands.hpp"
#include "bground/potential.hpp"
#include "bground/report.hpp"
#include "bground/rng.hpp"
#include "bground/schrodinger_operator.hpp"

#endif  // BGROUND_BGROUND_HPP
