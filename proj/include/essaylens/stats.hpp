#pragma once

#include "essaylens/stats/frame.hpp"
#include "essaylens/stats/kernels.hpp"
#include "essaylens/stats/model.hpp"
#include "essaylens/stats/tests.hpp"
