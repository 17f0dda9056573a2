"""Coverage and signal-strength planning for 169 MHz smart-metering radio networks.

The toolkit predicts, from a 3D environment map and a set of georeferenced
received-signal-strength measurements, where a data concentrator provides
coverage and how strong the signal is inside that area.  Classification
(covered / not covered) and regression (RSS in dBm) are both solved with
support-vector machines over a small set of geometric features.
"""

__version__ = "0.1.0"
