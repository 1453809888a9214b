"""Planning toolkit for flexible-grid elastic optical networks.

Builds rate-adaptive transceiver catalogs (probabilistically shaped QAM at
variable symbol rate), estimates lightpath SNR with a closed-form GN model,
plans lightpaths under SNR feasibility with first-fit spectrum assignment,
and reports provisioning metrics across traffic scenarios.
"""

__version__ = "0.1.0"
