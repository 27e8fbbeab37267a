# Chauvenet-type boxplot toolkit
__version__ = "0.1.0"
__description__ = "Outlier detection with Chauvenet-type and sample-size adjusted boxplot fences"
