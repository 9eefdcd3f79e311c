#pragma once

#include "hnp/arith.hpp"
#include "hnp/asymptotics.hpp"
#include "hnp/classify.hpp"
#include "hnp/enumerate.hpp"
#include "hnp/fields.hpp"
#include "hnp/report.hpp"
#include "hnp/verify.hpp"
