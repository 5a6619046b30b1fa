package app.util;

public final class TextUtil {
    public static final String DATE_PATTERN = "yyyy-MM-dd";
    public static final String NOT_A_KEY = "x.measurement.n50";

    private TextUtil() {}
}
