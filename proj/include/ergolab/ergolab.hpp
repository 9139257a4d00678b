// ergolab.hpp
// Umbrella header.

#pragma once

#include "ergolab/analytic.hpp"
#include "ergolab/core.hpp"
#include "ergolab/ergotropy.hpp"
#include "ergolab/multipartite.hpp"
#include "ergolab/optimizers.hpp"
#include "ergolab/oracle.hpp"
#include "ergolab/random.hpp"
#include "ergolab/sdp.hpp"
#include "ergolab/seesaw.hpp"
#include "ergolab/validation.hpp"
