# Reinitialization setting
config = dict(case=dict(name="multi",
                        multi_circles=[(-1.5, -1.2, 0.35), (-0.6, -1.2, 0.35), (0.3, -1.2, 0.35), (1.2, -1.2, 0.35),
                                       (-1.2, 0.0, 0.35), (-0.3, 0.0, 0.35), (0.6, 0.0, 0.35), (1.5, 0.0, 0.35),
                                       (-1.5, 1.2, 0.35), (-0.6, 1.2, 0.35), (0.3, 1.2, 0.35), (1.2, 1.2, 0.35)]),

              discretization=dict(order=5,
                                  levels=1,
                                  mesh=None,
                                  half_width=2.0,
                                  h=0.4),

              solver=dict(cfl=1.0,
                          final_time=1.1,
                          band=float("inf"),
                          bands=None,
                          progress=False),

              limiter=dict(mode="auto",
                           threshold=1.0,
                           fv_order=2),

              output=dict(results_dir="results/",
                          write_fields=True,
                          plot=False,
                          dump_operators=False,
                          log_level="INFO"))
