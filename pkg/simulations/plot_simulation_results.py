# NOTE: to run this file, you need the optional module "experiments":
#    pip install varmult[simulations]


from experiments_csv import multi_plot_results
from matplotlib import pyplot as plt


multi_plot_results(
     "results/stabilization_runtime_1.csv", save_to_file=True,
     filter={},
     x_field="size", y_field="runtime", z_field="pipeline", mean=True,
     subplot_field="family", subplot_rows=2, subplot_cols=3, sharex=True,
     legend_properties={"size": 6})

plt.show()
