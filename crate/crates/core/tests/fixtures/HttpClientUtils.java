public class HttpClientUtils {
    private static final String REQUEST_HEADER_CONTENT_LENGTH = "Content-Length";
    private static StringBuilder sendRequest(String method, String data, HttpURLConnection connection) throws Exception {
        if (HttpMethods.POST.equals(method)) {
            connection.setRequestProperty(REQUEST_HEADER_CONTENT_LENGTH, Integer.toString(data.getBytes().length));
            connection.setDoOutput(true);
            OutputStream os = connection.getOutputStream();
            os.write(data.getBytes());
            os.close();
        }
        StringBuilder response = new StringBuilder();
        InputStream is = connection.getInputStream();
        BufferedReader rd = new BufferedReader(new InputStreamReader(is));
        String line = rd.readLine();
        while (line != null) {
            response.append(line);
            line = rd.readLine();
        }
        rd.close();
        return response;
    }
}
