#pragma once

#include "tlss/errors.hpp"
#include "tlss/normal.hpp"
#include "tlss/kernel.hpp"
#include "tlss/distribution.hpp"
#include "tlss/quadrature.hpp"
#include "tlss/moments.hpp"
#include "tlss/modes.hpp"
#include "tlss/random.hpp"
#include "tlss/sampling.hpp"
#include "tlss/nelder_mead.hpp"
#include "tlss/models.hpp"
#include "tlss/fit.hpp"
#include "tlss/simstudy.hpp"
#include "tlss/dataset.hpp"
