#ifndef MALNORM_VERSION_HPP
#define MALNORM_VERSION_HPP

#define MALNORM_VERSION "0.1.0"

#endif
