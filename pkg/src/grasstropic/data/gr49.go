k=4 n=9
xx.x.
..o.o
x.o.
.o
