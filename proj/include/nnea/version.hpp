#pragma once

#define NNEA_VERSION "0.1.0"
