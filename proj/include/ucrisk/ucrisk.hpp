#ifndef UCRISK_UCRISK_HPP
#define UCRISK_UCRISK_HPP

#include "ucrisk/error.hpp"
#include "ucrisk/scenario.hpp"
#include "ucrisk/capacity.hpp"
#include "ucrisk/lp.hpp"
#include "ucrisk/risk.hpp"
#include "ucrisk/gexp.hpp"
#include "ucrisk/expr.hpp"
#include "ucrisk/io.hpp"

#endif  // UCRISK_UCRISK_HPP
