# Reinitialization setting
config = dict(case=dict(name="ellipse",
                        multi_circles=None),

              discretization=dict(order=5,
                                  levels=2,
                                  mesh=None,
                                  half_width=2.0,
                                  h=0.4),

              solver=dict(cfl=1.0,
                          final_time="auto",
                          band=float("inf"),
                          bands=[0.1, 0.2, 0.3],
                          progress=False),

              limiter=dict(mode="auto",
                           threshold=1.0,
                           fv_order=2),

              output=dict(results_dir="results/",
                          write_fields=True,
                          plot=False,
                          dump_operators=False,
                          log_level="INFO"))
