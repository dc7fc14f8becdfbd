k=2 n=4
x.
.o
