#pragma once

#include "hammock/color.hpp"
#include "hammock/connectors.hpp"
#include "hammock/dataset.hpp"
#include "hammock/error.hpp"
#include "hammock/format.hpp"
#include "hammock/layout.hpp"
#include "hammock/order.hpp"
#include "hammock/render.hpp"
#include "hammock/spec.hpp"
#include "hammock/strata.hpp"
