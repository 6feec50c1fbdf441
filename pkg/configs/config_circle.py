# Reinitialization setting
config = dict(case=dict(name="circle",
                        multi_circles=None),

              discretization=dict(order=3,
                                  levels=3,
                                  mesh=None,
                                  half_width=2.0,
                                  h=0.4),

              solver=dict(cfl=1.0,
                          final_time="auto",
                          band=0.3,
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
