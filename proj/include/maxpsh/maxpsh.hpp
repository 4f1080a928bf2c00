#pragma once

#include "maxpsh/convex_body.hpp"
#include "maxpsh/errors.hpp"
#include "maxpsh/gauge.hpp"
#include "maxpsh/geodesics.hpp"
#include "maxpsh/levi.hpp"
#include "maxpsh/maximality.hpp"
#include "maxpsh/models.hpp"
#include "maxpsh/random.hpp"
#include "maxpsh/sampling.hpp"
#include "maxpsh/types.hpp"
