#pragma once

#include "vnm/common.hpp"
#include "vnm/config.hpp"
#include "vnm/fisher.hpp"
#include "vnm/format.hpp"
#include "vnm/io.hpp"
#include "vnm/magnitude.hpp"
#include "vnm/mask.hpp"
#include "vnm/metrics.hpp"
#include "vnm/parallel.hpp"
#include "vnm/saliency.hpp"
#include "vnm/schedule.hpp"
#include "vnm/second_order.hpp"
#include "vnm/spmm.hpp"
