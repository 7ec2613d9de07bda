#pragma once

#include "icf/corpus.hpp"
#include "icf/flow.hpp"
#include "icf/hypersurface.hpp"
#include "icf/inequalities.hpp"
#include "icf/io.hpp"
#include "icf/math.hpp"
#include "icf/spaceform.hpp"
#include "icf/symfunc.hpp"
#include "icf/weight.hpp"
